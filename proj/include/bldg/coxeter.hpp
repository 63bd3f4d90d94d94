#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bldg {

/// Coxeter matrix entry: m(i,j) >= 1, or kInfinity for unbounded order.
constexpr int kInfinity = 0;

/// A Coxeter system (W, I): ordered generator set plus the Coxeter matrix.
/// The matrix is validated on construction (symmetric, 1 on the diagonal,
/// >= 2 off the diagonal, with kInfinity allowed off-diagonal).
class CoxeterSystem {
 public:
  explicit CoxeterSystem(std::vector<std::vector<int>> matrix);

  int rank() const { return static_cast<int>(matrix_.size()); }
  int order(int i, int j) const { return matrix_[i][j]; }
  const std::vector<std::vector<int>>& matrix() const { return matrix_; }

  /// True if i commutes with every other generator (an isolated diagram node).
  bool is_isolated(int i) const;

 private:
  std::vector<std::vector<int>> matrix_;
};

struct SphericalityReport {
  bool spherical = false;
  /// Irreducible component labels (A2, B3, I2(7), ... or "infinite").
  std::vector<std::string> components;
};

/// Finiteness test against the classification of finite irreducible diagrams.
SphericalityReport classify_diagram(const CoxeterSystem& w);
inline bool is_spherical(const CoxeterSystem& w) { return classify_diagram(w).spherical; }

/// Enumerated finite Coxeter group: shortlex normal forms, lengths, the
/// right-multiplication table and the longest element.
class ElementTable {
 public:
  static constexpr std::size_t kDefaultCap = 100000;

  /// BFS closure from the identity; throws if the group exceeds `cap`.
  ElementTable(const CoxeterSystem& w, std::size_t cap = kDefaultCap);

  int size() const { return static_cast<int>(length_.size()); }
  int rank() const { return rank_; }
  int length(int e) const { return length_[e]; }
  const std::vector<int>& word(int e) const { return word_[e]; }
  int identity() const { return 0; }
  int longest() const { return longest_; }

  /// e * s_gen
  int mul_gen(int e, int gen) const { return mul_[e][gen]; }
  /// e * f via f's normal form.
  int mul(int e, int f) const;
  int inverse(int e) const;
  /// Evaluate a word (sequence of generator indices) starting from identity.
  int eval(const std::vector<int>& word) const;

 private:
  int rank_;
  std::vector<int> length_;
  std::vector<std::vector<int>> word_;
  std::vector<std::vector<int>> mul_;
  int longest_ = -1;
};

/// The diagram permutation i -> type of w0 * s_i * w0.
std::vector<int> opposition_involution(const CoxeterSystem& w, const ElementTable& table);

/// Geometric data of the standard reflection representation: simple roots in
/// orthonormal coordinates, reflection matrices and the unit vectors of the
/// fundamental chamber's vertices (vertex i is orthogonal to all roots but i).
struct SphericalChart {
  Eigen::MatrixXd gram;                       // G(i,j) = -cos(pi/m(i,j))
  std::vector<Eigen::VectorXd> simple_roots;  // a_i . a_j = G(i,j)
  std::vector<Eigen::MatrixXd> reflections;
  std::vector<Eigen::VectorXd> chamber_vertices;  // unit vectors
};

/// Throws std::invalid_argument if the Gram matrix is not positive definite.
SphericalChart spherical_chart(const CoxeterSystem& w);

/// Orbit of the fundamental chamber's vertex tuple under the reflection
/// group, with 1e-9 point matching; equals |W| for a valid chart.
std::size_t chamber_orbit_size(const SphericalChart& chart, std::size_t cap = 1000000);

}  // namespace bldg
