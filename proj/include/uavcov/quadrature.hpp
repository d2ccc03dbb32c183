#pragma once

#include <span>
#include <vector>

namespace uavcov {

// Gauss-Legendre rule on [-1, 1]. Nodes are ascending.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  // Integrates f over [a, b].
  template <typename F>
  auto integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    auto sum = f(mid + half * nodes_[0]) * weights_[0];
    for (std::size_t k = 1; k < nodes_.size(); ++k) {
      sum = sum + f(mid + half * nodes_[k]) * weights_[k];
    }
    return sum * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Shared, lazily built rule for a given order.
const GaussLegendre& gauss_legendre(int order);

}  // namespace uavcov
