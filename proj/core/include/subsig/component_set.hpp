#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "subsig/errors.hpp"

namespace subsig {

/// Hard cap on the number of components of a system. Truth tables are
/// stored densely (2^n bits), so this bounds them to 2 MiB.
inline constexpr int kMaxComponents = 24;

/// A subset of the component set C = {1, ..., n}, stored as a bitmask
/// (component i <-> bit i-1). Value type; all operations are exact
/// bit manipulation.
class ComponentSet {
 public:
  constexpr ComponentSet() = default;
  constexpr explicit ComponentSet(std::uint32_t mask) : mask_(mask) {}

  static ComponentSet full(int n) {
    check_index_range(n);
    return ComponentSet(n == 0 ? 0u : (std::uint32_t{1} << n) - 1);
  }

  static ComponentSet of(std::initializer_list<int> components) {
    ComponentSet s;
    for (int c : components) s = s.with(c);
    return s;
  }

  static ComponentSet of(const std::vector<int>& components) {
    ComponentSet s;
    for (int c : components) s = s.with(c);
    return s;
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  int count() const { return std::popcount(mask_); }

  bool contains(int component) const {
    check_index(component);
    return (mask_ >> (component - 1)) & 1u;
  }

  ComponentSet with(int component) const {
    check_index(component);
    return ComponentSet(mask_ | bit(component));
  }

  ComponentSet without(int component) const {
    check_index(component);
    return ComponentSet(mask_ & ~bit(component));
  }

  constexpr bool subset_of(ComponentSet other) const { return (mask_ & ~other.mask_) == 0; }

  friend constexpr ComponentSet operator&(ComponentSet a, ComponentSet b) {
    return ComponentSet(a.mask_ & b.mask_);
  }
  friend constexpr ComponentSet operator|(ComponentSet a, ComponentSet b) {
    return ComponentSet(a.mask_ | b.mask_);
  }
  /// Set difference a \ b.
  friend constexpr ComponentSet operator-(ComponentSet a, ComponentSet b) {
    return ComponentSet(a.mask_ & ~b.mask_);
  }
  friend constexpr bool operator==(ComponentSet, ComponentSet) = default;

  /// Component indices in ascending order.
  std::vector<int> components() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint32_t m = mask_; m != 0; m &= m - 1)
      out.push_back(std::countr_zero(m) + 1);
    return out;
  }

  int smallest() const {
    if (mask_ == 0) throw DomainError("smallest() on empty component set");
    return std::countr_zero(mask_) + 1;
  }

  /// "{1,3,4}", the serialization used for set-keyed JSON maps.
  std::string to_brace_string() const {
    std::string out = "{";
    bool first = true;
    for (int c : components()) {
      if (!first) out += ',';
      out += std::to_string(c);
      first = false;
    }
    out += '}';
    return out;
  }

 private:
  static constexpr std::uint32_t bit(int component) {
    return std::uint32_t{1} << (component - 1);
  }
  static void check_index(int component) {
    if (component < 1 || component > kMaxComponents)
      throw DomainError("component index " + std::to_string(component) + " outside 1.." +
                        std::to_string(kMaxComponents));
  }
  static void check_index_range(int n) {
    if (n < 0 || n > kMaxComponents)
      throw CapabilityError("component count " + std::to_string(n) + " outside 0.." +
                            std::to_string(kMaxComponents));
  }

  std::uint32_t mask_ = 0;
};

}  // namespace subsig
