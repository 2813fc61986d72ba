#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace magtrace {

// Multi-indices in dimension <= 2.  Stored with a fixed capacity so they can
// be used as cheap value types and map keys.
struct MultiIndex {
  static constexpr int max_dim = 2;
  std::array<int, max_dim> e{0, 0};
  int d = 1;

  MultiIndex() = default;
  explicit MultiIndex(int dim) : d(dim) {
    if (dim < 1 || dim > max_dim) throw std::invalid_argument("MultiIndex: bad dimension");
  }
  MultiIndex(int dim, std::initializer_list<int> v) : d(dim) {
    if (dim < 1 || dim > max_dim) throw std::invalid_argument("MultiIndex: bad dimension");
    int i = 0;
    for (int x : v) {
      if (x < 0) throw std::invalid_argument("MultiIndex: negative entry");
      e[i++] = x;
    }
  }
  static MultiIndex unit(int dim, int j) {
    MultiIndex m(dim);
    m.e[j] = 1;
    return m;
  }

  int order() const { return e[0] + e[1]; }
  long factorial() const {
    auto f = [](int n) { long r = 1; for (int i = 2; i <= n; ++i) r *= i; return r; };
    return f(e[0]) * f(e[1]);
  }
  int operator[](int j) const { return e[j]; }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r(d);
    for (int j = 0; j < d; ++j) r.e[j] = e[j] + o.e[j];
    return r;
  }
  // componentwise difference; caller must ensure o <= *this
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r(d);
    for (int j = 0; j < d; ++j) {
      r.e[j] = e[j] - o.e[j];
      if (r.e[j] < 0) throw std::invalid_argument("MultiIndex: negative difference");
    }
    return r;
  }
  bool operator==(const MultiIndex& o) const { return d == o.d && e == o.e; }
  bool operator<(const MultiIndex& o) const {
    if (order() != o.order()) return order() < o.order();
    return e < o.e;
  }
};

}  // namespace magtrace
