#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "stokes2/params.hpp"
#include "stokes2/quadrature.hpp"

namespace stokes2 {

/// Symmetric panel-based wavenumber grid on [-k_max, k_max] with
/// Gauss-Legendre nodes per panel. Panels are graded toward k = 0, where the
/// spectral densities vary fastest, and can be capped in width so that
/// downstream Fourier factors e^{ikx} stay resolved.
class KGrid {
 public:
  /// Graded construction. `max_width` limits the panel width (pass infinity
  /// when no oscillation needs resolving).
  static KGrid build(double k_max, int nodes_per_panel,
                     double max_width = std::numeric_limits<double>::infinity()) {
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw ConfigError("k_max must be finite and > 0");
    if (nodes_per_panel < 2) throw ConfigError("nodes_per_panel must be >= 2");
    if (!(max_width > 0.0)) throw ConfigError("max_width must be > 0");

    std::vector<double> half = {0.0};
    double edge = 0.25;
    while (edge < k_max) {
      half.push_back(edge);
      edge *= 2.0;
    }
    half.push_back(k_max);
    // drop a stub last panel that doubling left too thin
    if (half.size() >= 3 && (half.back() - half[half.size() - 2]) <
                                0.25 * (half[half.size() - 2] - half[half.size() - 3]))
      half.erase(half.end() - 2);

    // enforce the width cap by uniform subdivision
    std::vector<double> edges;
    edges.push_back(0.0);
    for (std::size_t i = 0; i + 1 < half.size(); ++i) {
      const double a = half[i], b = half[i + 1];
      const int parts = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
      for (int j = 1; j <= parts; ++j) edges.push_back(a + (b - a) * j / parts);
    }

    KGrid g;
    g.nodes_per_panel_ = nodes_per_panel;
    const GaussRule& rule = gauss_legendre(nodes_per_panel);
    const std::size_t panels_half = edges.size() - 1;
    std::vector<double> pos_nodes, pos_weights;
    pos_nodes.reserve(panels_half * nodes_per_panel);
    for (std::size_t p = 0; p < panels_half; ++p) {
      const double a = edges[p], b = edges[p + 1];
      const double c = 0.5 * (a + b), h = 0.5 * (b - a);
      for (int i = 0; i < nodes_per_panel; ++i) {
        pos_nodes.push_back(c + h * rule.x[i]);
        pos_weights.push_back(h * rule.w[i]);
      }
    }
    // mirror: negative side first (exactly -k for every positive node k)
    const std::size_t n_half = pos_nodes.size();
    g.nodes_.resize(2 * n_half);
    g.weights_.resize(2 * n_half);
    for (std::size_t i = 0; i < n_half; ++i) {
      g.nodes_[n_half - 1 - i] = -pos_nodes[i];
      g.weights_[n_half - 1 - i] = pos_weights[i];
      g.nodes_[n_half + i] = pos_nodes[i];
      g.weights_[n_half + i] = pos_weights[i];
    }
    g.edges_.resize(2 * edges.size() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      g.edges_[edges.size() - 1 - i] = -edges[i];
      g.edges_[edges.size() - 1 + i] = edges[i];
    }
    g.k_max_ = k_max;
    return g;
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& edges() const { return edges_; }
  double k_max() const { return k_max_; }
  int nodes_per_panel() const { return nodes_per_panel_; }
  std::size_t size() const { return nodes_.size(); }

  /// Index of the node at -k for the node at index i (grids are built
  /// mirror-symmetric, so this is exact).
  std::size_t mirror_index(std::size_t i) const { return nodes_.size() - 1 - i; }

  double max_panel_width() const {
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) w = std::max(w, edges_[i + 1] - edges_[i]);
    return w;
  }

  /// Barycentric interpolation of nodal data at |k| <= k_max, using the
  /// Gauss-Legendre nodes of the panel containing k.
  Complex interpolate(std::span<const Complex> values, double k) const {
    if (values.size() != nodes_.size())
      throw ConfigError("KGrid::interpolate: value array does not match the grid");
    if (std::abs(k) > k_max_ * (1.0 + 1e-12))
      throw DomainError("KGrid::interpolate: |k| beyond k_max");
    k = std::clamp(k, -k_max_, k_max_);
    auto it = std::upper_bound(edges_.begin(), edges_.end(), k);
    std::size_t panel = (it == edges_.begin()) ? 0 : (it - edges_.begin() - 1);
    panel = std::min(panel, edges_.size() - 2);
    const double a = edges_[panel], b = edges_[panel + 1];
    const double u = (2.0 * k - a - b) / (b - a);  // reference coordinate
    const GaussRule& rule = gauss_legendre(nodes_per_panel_);
    const std::size_t base = panel * nodes_per_panel_;
    Complex num = 0.0;
    double den = 0.0;
    for (int i = 0; i < nodes_per_panel_; ++i) {
      const double d = u - rule.x[i];
      if (std::abs(d) < 1e-14) return values[base + i];
      const double c = rule.bary[i] / d;
      num += c * values[base + i];
      den += c;
    }
    return num / den;
  }

 private:
  std::vector<double> nodes_, weights_, edges_;
  double k_max_ = 0.0;
  int nodes_per_panel_ = 0;
};

using KGridPtr = std::shared_ptr<const KGrid>;

}  // namespace stokes2
