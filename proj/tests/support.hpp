#pragma once

#include "mtra/fixtures.hpp"
#include "mtra/io.hpp"

#include <string>
#include <vector>

namespace mtra::test {

inline Instance data_instance(const std::string& name, TiebreakSpec* tiebreak = nullptr) {
  return load_instance(std::string(MTRA_DATA_DIR) + "/" + name, tiebreak);
}

inline const ShareTable kSeparate = {{{"1F1B", "1/2"}, {"1F2B", "1/2"}}, {{"2F1B", "1/2"}, {"2F2B", "1/2"}}};
inline const ShareTable kDiagonal = {{{"1F1B", "1/2"}, {"2F2B", "1/2"}}, {{"1F1B", "1/2"}, {"2F2B", "1/2"}}};
inline const ShareTable kCrossed = {{{"1F2B", "1/2"}, {"2F1B", "1/2"}}, {{"1F1B", "1/2"}, {"2F2B", "1/2"}}};

inline std::vector<BundleIndex> named(const Instance& instance, const std::vector<std::string>& names) {
  std::vector<BundleIndex> out;
  for (const auto& n : names) out.push_back(instance.bundle_named(n));
  return out;
}

inline std::vector<std::string> names_of(const Instance& instance, const std::vector<BundleIndex>& bundles) {
  std::vector<std::string> out;
  for (auto b : bundles) out.push_back(instance.bundle_name(b));
  return out;
}

inline LinearOrder sequence(const Instance& instance, const std::vector<std::string>& names) {
  return LinearOrder{named(instance, names)};
}

inline PartialOrder chain(const Instance& instance, const std::vector<std::string>& names) {
  const auto seq = named(instance, names);
  return PartialOrder::from_sequence(instance.bundle_count(), seq);
}

}  // namespace mtra::test
