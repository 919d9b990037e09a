#include "polysym/perm.hpp"

#include <numeric>
#include <ostream>
#include <sstream>

#include "polysym/error.hpp"

namespace polysym::perm {

Perm::Perm(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), Point{0});
}

Perm::Perm(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x]) {
      throw InvalidArgument("image list is not a permutation");
    }
    seen[x] = true;
  }
}

Perm Perm::operator*(const Perm& rhs) const {
  if (rhs.degree() != degree()) {
    throw InvalidArgument("degree mismatch in permutation product");
  }
  Perm out;
  out.images_.resize(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) {
    out.images_[x] = rhs.images_[images_[x]];
  }
  return out;
}

Perm& Perm::operator*=(const Perm& rhs) {
  if (rhs.degree() != degree()) {
    throw InvalidArgument("degree mismatch in permutation product");
  }
  for (auto& x : images_) {
    x = rhs.images_[x];
  }
  return *this;
}

Perm Perm::inverse() const {
  Perm out;
  out.images_.resize(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) {
    out.images_[images_[x]] = static_cast<Point>(x);
  }
  return out;
}

Perm Perm::pow(long long k) const {
  Perm base = k < 0 ? inverse() : *this;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Perm result(degree());
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

bool Perm::is_identity() const {
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (images_[x] != x) return false;
  }
  return true;
}

std::string Perm::to_string() const {
  std::ostringstream os;
  os << "p:";
  for (Point x : images_) os << ' ' << x;
  return os.str();
}

Perm Perm::parse(const std::string& line) {
  std::istringstream is(line);
  std::string tag;
  is >> tag;
  if (tag != "p:") throw InvalidArgument("permutation line must start with 'p:'");
  std::vector<Point> images;
  long long x;
  while (is >> x) {
    if (x < 0) throw InvalidArgument("negative point in permutation");
    images.push_back(static_cast<Point>(x));
  }
  if (!is.eof()) throw InvalidArgument("malformed permutation line");
  return Perm(std::move(images));
}

std::ostream& operator<<(std::ostream& os, const Perm& p) { return os << p.to_string(); }

std::vector<std::size_t> cycle_lengths(const Perm& p) {
  std::vector<std::size_t> out;
  std::vector<bool> seen(p.degree(), false);
  for (Point x = 0; x < p.degree(); ++x) {
    if (seen[x]) continue;
    std::size_t len = 0;
    for (Point y = x; !seen[y]; y = p[y]) {
      seen[y] = true;
      ++len;
    }
    out.push_back(len);
  }
  return out;
}

BigInt element_order(const Perm& p) {
  BigInt order = 1;
  for (std::size_t len : cycle_lengths(p)) {
    order = boost::multiprecision::lcm(order, BigInt(len));
  }
  return order;
}

std::size_t PermHash::operator()(const Perm& p) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Point x : p.images()) {
    h ^= x;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace polysym::perm
