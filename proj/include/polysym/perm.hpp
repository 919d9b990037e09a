#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polysym {

using BigInt = boost::multiprecision::cpp_int;
using Point = std::uint32_t;

namespace perm {

// A bijection of {0..n-1}. Products compose left to right: (a * b)[x] = b[a[x]],
// so a word g1 g2 ... acts on points as "apply g1, then g2, ...".
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t degree);
  explicit Perm(std::vector<Point> images);

  static Perm identity(std::size_t degree) { return Perm(degree); }

  std::size_t degree() const { return images_.size(); }
  Point operator[](Point x) const { return images_[x]; }
  std::span<const Point> images() const { return images_; }

  Perm operator*(const Perm& rhs) const;
  Perm& operator*=(const Perm& rhs);
  Perm inverse() const;
  Perm pow(long long k) const;
  bool is_identity() const;

  bool operator==(const Perm&) const = default;
  auto operator<=>(const Perm&) const = default;

  // `p: 2 0 1 ...`
  std::string to_string() const;
  static Perm parse(const std::string& line);

 private:
  std::vector<Point> images_;
};

std::ostream& operator<<(std::ostream& os, const Perm& p);

// lcm of the cycle lengths.
BigInt element_order(const Perm& p);

// Cycle lengths in order of the smallest point of each cycle.
std::vector<std::size_t> cycle_lengths(const Perm& p);

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept;
};

}  // namespace perm
}  // namespace polysym
