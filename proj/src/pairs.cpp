// Copyright 2026 The irisnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <map>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/iris_data.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/rng.hpp"

namespace irisnet {

std::string to_string(PairKind kind) {
  return kind == PairKind::genuine ? "genuine" : "impostor";
}

PairKind parse_pair_kind(const std::string& text) {
  if (text == "genuine") return PairKind::genuine;
  if (text == "impostor") return PairKind::impostor;
  throw DataError("invalid pair kind '" + text + "'");
}

PairList generate_genuine_pairs(const DatasetManifest& manifest) {
  PairList list{PairKind::genuine, {}};
  for (const auto& cls : manifest.classes()) {
    const auto& m = cls.members;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) list.pairs.push_back({m[i], m[j]});
    }
  }
  return list;
}

PairList generate_impostor_pairs(const DatasetManifest& manifest, std::uint64_t seed) {
  // Classes grouped by side, each group in class_id order.
  std::map<EyeSide, std::vector<const ClassGroup*>> sides;
  for (const auto& cls : manifest.classes()) sides[cls.side].push_back(&cls);

  PairList list{PairKind::impostor, {}};
  for (const auto& [side, group] : sides) {
    const std::size_t c = group.size();
    if (c < 2) continue;
    const std::size_t offset = list.pairs.size();
    list.pairs.resize(offset + c * (c - 1));
    parallel_for(c, [&, offset](std::size_t ref) {
      const ClassGroup& reference = *group[ref];
      const std::uint64_t key = mix_keys(seed, hash_string(reference.class_id));
      std::size_t slot = offset + ref * (c - 1);
      std::uint64_t comparison = 0;
      for (std::size_t other = 0; other < c; ++other) {
        if (other == ref) continue;
        Rng rng(key, comparison++);
        const auto& members_a = reference.members;
        const auto& members_b = group[other]->members;
        const std::size_t a = members_a[rng.below(members_a.size())];
        const std::size_t b = members_b[rng.below(members_b.size())];
        list.pairs[slot++] = {a, b};
      }
    });
  }
  return list;
}

std::vector<PathPair> to_path_pairs(const DatasetManifest& manifest, const PairList& list) {
  std::vector<PathPair> out;
  out.reserve(list.pairs.size());
  for (const auto& p : list.pairs) {
    out.push_back({manifest.entries()[p.a].image, manifest.entries()[p.b].image, list.kind});
  }
  return out;
}

void write_pairs_csv(const std::filesystem::path& path, const std::vector<PathPair>& pairs) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "path_a,path_b,kind\n";
  for (const auto& p : pairs) out << p.a << ',' << p.b << ',' << to_string(p.kind) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<PathPair> read_pairs_csv(const std::filesystem::path& path) {
  std::vector<PathPair> pairs;
  for (const auto& row : csv::read(path, "path_a,path_b,kind")) {
    if (row.size() != 3) throw DataError(path.string() + ": expected 3 fields per pair row");
    pairs.push_back({row[0], row[1], parse_pair_kind(row[2])});
  }
  return pairs;
}

}  // namespace irisnet
