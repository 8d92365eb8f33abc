#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mtra {

using AgentIndex = std::size_t;
using BundleIndex = std::size_t;
// Global item index: type * items_per_type + position within the type.
using ItemIndex = std::size_t;

// One item per type, positions in canonical type order.
struct Bundle {
  std::vector<std::size_t> items;

  bool operator==(const Bundle&) const = default;
};

// Mixed-radix enumeration of D_1 x ... x D_p. The first type is the most
// significant digit, so index order is the canonical lexicographic order.
class BundleSpace {
 public:
  BundleSpace() = default;
  BundleSpace(std::size_t items_per_type, std::size_t type_count);

  std::size_t items_per_type() const { return n_; }
  std::size_t type_count() const { return p_; }
  std::size_t size() const { return size_; }
  std::size_t item_count() const { return n_ * p_; }

  std::size_t item_of(BundleIndex bundle, std::size_t type) const {
    return (bundle / strides_[type]) % n_;
  }
  ItemIndex global_item(std::size_t type, std::size_t item) const { return type * n_ + item; }
  ItemIndex global_item_of(BundleIndex bundle, std::size_t type) const {
    return global_item(type, item_of(bundle, type));
  }
  bool contains(BundleIndex bundle, ItemIndex item) const {
    return item_of(bundle, item / n_) == item % n_;
  }

  // Bundle equal to `bundle` except that `type` holds `item`.
  BundleIndex with_item(BundleIndex bundle, std::size_t type, std::size_t item) const;

  Bundle decode(BundleIndex bundle) const;
  BundleIndex encode(std::span<const std::size_t> items) const;
  BundleIndex encode(const Bundle& bundle) const { return encode(bundle.items); }

  bool operator==(const BundleSpace& other) const { return n_ == other.n_ && p_ == other.p_; }

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;
};

// Availability of items, indexed by global item.
using ItemMask = std::vector<bool>;

}  // namespace mtra
