#pragma once

#include <map>
#include <string>
#include <vector>

#include "bellmeet/graph.hpp"

namespace bellmeet {

// Built-in arenas addressable by name:
//   cubic-2 .. cubic-9   (3-regular graphs on 6 or 8 nodes, anti-reflexive)
//   cycle-<n>            (undirected anti-reflexive cycle)
//   dircycle-<n>         (directed anti-reflexive cycle)
// Reflexive variants are derived with make_reflexive, not stored.
// There is no cubic-1 in the catalog.
inline const std::map<std::string, std::vector<std::vector<int>>>& cubic_catalog() {
  static const std::map<std::string, std::vector<std::vector<int>>> k = {
      {"cubic-2", {{2, 3, 4}, {1, 3, 5}, {1, 2, 6}, {1, 5, 6}, {2, 4, 6}, {3, 4, 5}}},
      {"cubic-3", {{4, 5, 6}, {4, 5, 6}, {4, 5, 6}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}}},
      {"cubic-4",
       {{3, 5, 7}, {4, 6, 8}, {1, 5, 7}, {2, 6, 8}, {1, 3, 7}, {2, 4, 8}, {1, 3, 5}, {2, 4, 6}}},
      {"cubic-5",
       {{2, 5, 6}, {1, 3, 6}, {2, 4, 7}, {3, 5, 8}, {1, 4, 8}, {1, 2, 7}, {3, 6, 8}, {4, 5, 7}}},
      {"cubic-6",
       {{2, 3, 4}, {1, 3, 6}, {1, 2, 8}, {1, 5, 7}, {4, 6, 8}, {2, 5, 7}, {4, 6, 8}, {3, 5, 7}}},
      {"cubic-7",
       {{2, 4, 5}, {1, 3, 6}, {2, 4, 7}, {1, 3, 8}, {1, 6, 8}, {2, 5, 7}, {3, 6, 8}, {4, 5, 7}}},
      {"cubic-8",
       {{2, 6, 7}, {1, 3, 7}, {2, 4, 7}, {3, 5, 8}, {4, 6, 8}, {1, 5, 8}, {1, 2, 3}, {4, 5, 6}}},
      {"cubic-9",
       {{2, 5, 8}, {1, 3, 6}, {2, 4, 7}, {3, 5, 8}, {1, 4, 6}, {2, 5, 7}, {3, 6, 8}, {1, 4, 7}}},
  };
  return k;
}

inline Graph catalog_graph(const std::string& name) {
  const auto& cubics = cubic_catalog();
  if (auto it = cubics.find(name); it != cubics.end()) return from_adjacency_list(it->second);
  auto parse_size = [&](const std::string& prefix) -> int {
    const std::string digits = name.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError("bad graph name: " + name);
    return std::stoi(digits);
  };
  if (name.rfind("dircycle-", 0) == 0) return build_cycle(parse_size("dircycle-"), false, true);
  if (name.rfind("cycle-", 0) == 0) return build_cycle(parse_size("cycle-"), false, false);
  throw ValidationError("unknown catalog graph: " + name +
                        " (expected cubic-2..cubic-9, cycle-<n> or dircycle-<n>)");
}

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : cubic_catalog()) names.push_back(k);
  names.push_back("cycle-<n>");
  names.push_back("dircycle-<n>");
  return names;
}

}  // namespace bellmeet
