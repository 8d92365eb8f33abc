#include "mtra/bundle.hpp"

#include <cassert>

namespace mtra {

BundleSpace::BundleSpace(std::size_t items_per_type, std::size_t type_count)
    : n_(items_per_type), p_(type_count), size_(1), strides_(type_count) {
  for (std::size_t t = type_count; t-- > 0;) {
    strides_[t] = size_;
    size_ *= n_;
  }
}

BundleIndex BundleSpace::with_item(BundleIndex bundle, std::size_t type, std::size_t item) const {
  const std::size_t current = item_of(bundle, type);
  return bundle - current * strides_[type] + item * strides_[type];
}

Bundle BundleSpace::decode(BundleIndex bundle) const {
  Bundle out;
  out.items.resize(p_);
  for (std::size_t t = 0; t < p_; ++t) out.items[t] = item_of(bundle, t);
  return out;
}

BundleIndex BundleSpace::encode(std::span<const std::size_t> items) const {
  assert(items.size() == p_);
  BundleIndex index = 0;
  for (std::size_t t = 0; t < p_; ++t) index += items[t] * strides_[t];
  return index;
}

}  // namespace mtra
