#include "bldg/coxeter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <set>

namespace bldg {
namespace {

constexpr double kTol = 1e-9;

double gram_entry(int m) {
  if (m == kInfinity) return -1.0;
  return -std::cos(std::numbers::pi / m);
}

int find_vector(const std::vector<Eigen::VectorXd>& vecs, const Eigen::VectorXd& v) {
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    if ((vecs[k] - v).lpNorm<Eigen::Infinity>() < 1e-7) return static_cast<int>(k);
  }
  return -1;
}

// Numerically closed root system; throws if the closure exceeds `cap` roots
// (which signals an infinite group).
std::vector<Eigen::VectorXd> enumerate_roots(const std::vector<Eigen::VectorXd>& simple,
                                             const std::vector<Eigen::MatrixXd>& refl,
                                             std::size_t cap) {
  std::vector<Eigen::VectorXd> roots(simple);
  for (std::size_t head = 0; head < roots.size(); ++head) {
    for (const auto& r : refl) {
      Eigen::VectorXd img = r * roots[head];
      if (find_vector(roots, img) < 0) {
        roots.push_back(img);
        if (roots.size() > cap) throw std::runtime_error("coxeter: root closure exceeds cap");
      }
    }
  }
  return roots;
}

struct GeometricRep {
  std::vector<Eigen::VectorXd> simple_roots;
  std::vector<Eigen::MatrixXd> reflections;
};

GeometricRep geometric_rep(const CoxeterSystem& w) {
  const int n = w.rank();
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = gram_entry(w.order(i, j));
  // Simple roots with pairwise inner products given by the Gram matrix.
  // For the spherical case this is a Cholesky factor; otherwise fall back to
  // a symmetric square root so the construction still exists numerically.
  Eigen::MatrixXd a;  // rows are the simple roots
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    a = Eigen::MatrixXd(llt.matrixL());
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    a = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }
  GeometricRep rep;
  for (int i = 0; i < n; ++i) rep.simple_roots.push_back(a.row(i).transpose());
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) -
                        2.0 * rep.simple_roots[i] * rep.simple_roots[i].transpose();
    rep.reflections.push_back(m);
  }
  return rep;
}

}  // namespace

CoxeterSystem::CoxeterSystem(std::vector<std::vector<int>> matrix) : matrix_(std::move(matrix)) {
  const std::size_t n = matrix_.size();
  if (n == 0) throw std::invalid_argument("coxeter: empty matrix");
  for (const auto& row : matrix_) {
    if (row.size() != n) throw std::invalid_argument("coxeter: matrix not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix_[i][i] != 1) throw std::invalid_argument("coxeter: diagonal must be 1");
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix_[i][j] != matrix_[j][i]) throw std::invalid_argument("coxeter: matrix asymmetric");
      if (i != j && matrix_[i][j] != kInfinity && matrix_[i][j] < 2)
        throw std::invalid_argument("coxeter: off-diagonal entries must be >= 2 (or 0 for infinity)");
    }
  }
}

bool CoxeterSystem::is_isolated(int i) const {
  for (int j = 0; j < rank(); ++j) {
    if (j != i && order(i, j) != 2) return false;
  }
  return true;
}

namespace {

// Classifies one connected diagram component given as vertex list + edges.
std::string classify_component(const CoxeterSystem& w, const std::vector<int>& verts) {
  const int n = static_cast<int>(verts.size());
  auto m = [&](int a, int b) { return w.order(verts[a], verts[b]); };
  if (n == 1) return "A1";
  if (n == 2) {
    int o = m(0, 1);
    if (o == kInfinity) return "infinite";
    if (o == 3) return "A2";
    if (o == 4) return "B2";
    if (o == 6) return "G2";
    return "I2(" + std::to_string(o) + ")";
  }
  // Rank >= 3: the diagram must be a tree with labels in {3,4,5}.
  std::vector<std::vector<int>> adj(n);
  std::vector<int> labels;
  int edges = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int o = m(a, b);
      if (o == kInfinity || o > 5) {
        if (o != 2) return "infinite";
      }
      if (o >= 3) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        labels.push_back(o);
        ++edges;
      }
    }
  if (edges != n - 1) return "infinite";  // a cycle (affine A~) or disconnected
  int branch = -1, leaves = 0;
  for (int a = 0; a < n; ++a) {
    if (adj[a].size() >= 4) return "infinite";
    if (adj[a].size() == 3) {
      if (branch >= 0) return "infinite";
      branch = a;
    }
    if (adj[a].size() == 1) ++leaves;
  }
  auto count_label = [&](int o) { return std::count(labels.begin(), labels.end(), o); };
  const long n4 = count_label(4), n5 = count_label(5);
  if (branch < 0) {
    // A path; orient it and read the labels.
    int start = -1;
    for (int a = 0; a < n && start < 0; ++a)
      if (adj[a].size() == 1) start = a;
    std::vector<int> path{start};
    int prev = -1, cur = start;
    while (static_cast<int>(path.size()) < n) {
      for (int nb : adj[cur])
        if (nb != prev) {
          path.push_back(nb);
          prev = cur;
          cur = nb;
          break;
        }
    }
    std::vector<int> seq;
    for (int k = 0; k + 1 < n; ++k) seq.push_back(m(path[k], path[k + 1]));
    if (n5 == 0 && n4 == 0) return "A" + std::to_string(n);
    if (n5 == 0 && n4 == 1) {
      if (seq.front() == 4 || seq.back() == 4) return "B" + std::to_string(n);
      if (n == 4 && seq[1] == 4) return "F4";
      return "infinite";
    }
    if (n4 == 0 && n5 == 1 && (seq.front() == 5 || seq.back() == 5)) {
      if (n == 3) return "H3";
      if (n == 4) return "H4";
      return "infinite";
    }
    return "infinite";
  }
  // One branch node; only simply laced types D and E remain.
  if (n4 != 0 || n5 != 0) return "infinite";
  std::vector<int> arms;
  for (int nb : adj[branch]) {
    int len = 1, prev = branch, cur = nb;
    while (adj[cur].size() == 2) {
      for (int nx : adj[cur])
        if (nx != prev) {
          prev = cur;
          cur = nx;
          break;
        }
      ++len;
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  if (arms[0] == 1 && arms[1] == 1) return "D" + std::to_string(n);
  if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4)
    return "E" + std::to_string(n);
  return "infinite";
}

}  // namespace

SphericalityReport classify_diagram(const CoxeterSystem& w) {
  const int n = w.rank();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::queue<int> q;
    q.push(i);
    comp[i] = ncomp;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && w.order(v, j) != 2) {
          comp[j] = ncomp;
          q.push(j);
        }
    }
    ++ncomp;
  }
  SphericalityReport rep;
  rep.spherical = true;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> verts;
    for (int i = 0; i < n; ++i)
      if (comp[i] == c) verts.push_back(i);
    std::string label = classify_component(w, verts);
    if (label == "infinite") rep.spherical = false;
    rep.components.push_back(label);
  }
  return rep;
}

ElementTable::ElementTable(const CoxeterSystem& w, std::size_t cap) : rank_(w.rank()) {
  if (!is_spherical(w)) throw std::runtime_error("coxeter: enumeration cap exceeded (infinite group)");
  GeometricRep rep = geometric_rep(w);
  // Permutation action on the root system is faithful for finite W.
  std::vector<Eigen::VectorXd> roots = enumerate_roots(rep.simple_roots, rep.reflections, 4 * cap);
  const int nroots = static_cast<int>(roots.size());
  std::vector<std::vector<int>> gen_perm(rank_, std::vector<int>(nroots));
  for (int i = 0; i < rank_; ++i) {
    for (int r = 0; r < nroots; ++r) {
      int img = find_vector(roots, rep.reflections[i] * roots[r]);
      if (img < 0) throw std::runtime_error("coxeter: root system not closed");
      gen_perm[i][r] = img;
    }
  }
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> perms;
  std::vector<int> ident(nroots);
  for (int r = 0; r < nroots; ++r) ident[r] = r;
  index[ident] = 0;
  perms.push_back(ident);
  length_.push_back(0);
  word_.push_back({});
  // BFS in shortlex order: FIFO queue, generators in ascending order, so the
  // first word reaching an element is its shortlex-least reduced word.
  for (std::size_t head = 0; head < perms.size(); ++head) {
    mul_.emplace_back(rank_, -1);
    for (int s = 0; s < rank_; ++s) {
      std::vector<int> img(nroots);
      for (int r = 0; r < nroots; ++r) img[r] = perms[head][gen_perm[s][r]];
      auto [it, inserted] = index.emplace(std::move(img), static_cast<int>(perms.size()));
      if (inserted) {
        perms.push_back(it->first);
        length_.push_back(length_[head] + 1);
        std::vector<int> word = word_[head];
        word.push_back(s);
        word_.push_back(std::move(word));
        if (perms.size() > cap) throw std::runtime_error("coxeter: enumeration cap exceeded");
      }
      mul_[head][s] = it->second;
    }
  }
  int maxlen = *std::max_element(length_.begin(), length_.end());
  int count = 0;
  for (std::size_t e = 0; e < length_.size(); ++e) {
    if (length_[e] == maxlen) {
      longest_ = static_cast<int>(e);
      ++count;
    }
  }
  if (count != 1) throw std::runtime_error("coxeter: longest element not unique");
}

int ElementTable::mul(int e, int f) const {
  int cur = e;
  for (int s : word_[f]) cur = mul_[cur][s];
  return cur;
}

int ElementTable::inverse(int e) const {
  int cur = identity();
  const auto& wrd = word_[e];
  for (auto it = wrd.rbegin(); it != wrd.rend(); ++it) cur = mul_[cur][*it];
  return cur;
}

int ElementTable::eval(const std::vector<int>& word) const {
  int cur = identity();
  for (int s : word) cur = mul_[cur][s];
  return cur;
}

std::vector<int> opposition_involution(const CoxeterSystem& w, const ElementTable& table) {
  if (!is_spherical(w)) throw std::invalid_argument("opposition_involution: non-spherical system");
  std::vector<int> sigma(w.rank());
  const int w0 = table.longest();
  for (int i = 0; i < w.rank(); ++i) {
    int e = table.mul(table.mul_gen(w0, i), w0);
    if (table.length(e) != 1) throw std::runtime_error("opposition: conjugate not a generator");
    sigma[i] = table.word(e)[0];
  }
  return sigma;
}

SphericalChart spherical_chart(const CoxeterSystem& w) {
  const int n = w.rank();
  SphericalChart chart;
  chart.gram.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) chart.gram(i, j) = gram_entry(w.order(i, j));
  Eigen::LLT<Eigen::MatrixXd> llt(chart.gram);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("spherical_chart: Gram matrix not positive definite");
  GeometricRep rep = geometric_rep(w);
  chart.simple_roots = rep.simple_roots;
  chart.reflections = rep.reflections;
  // Vertex i of the fundamental chamber: orthogonal to all simple roots but i.
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) a.row(i) = rep.simple_roots[i].transpose();
  Eigen::MatrixXd ainv = a.inverse();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = ainv.col(i);
    chart.chamber_vertices.push_back(v / v.norm());
  }
  // Sanity: reflections are involutions and preserve the inner product.
  for (const auto& r : chart.reflections) {
    if (((r * r) - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() > kTol)
      throw std::runtime_error("spherical_chart: reflection not an involution");
    if ((r.transpose() * r - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() > kTol)
      throw std::runtime_error("spherical_chart: reflection not orthogonal");
  }
  return chart;
}

std::size_t chamber_orbit_size(const SphericalChart& chart, std::size_t cap) {
  const int n = static_cast<int>(chart.chamber_vertices.size());
  auto flatten = [n](const std::vector<Eigen::VectorXd>& vs) {
    Eigen::VectorXd out(n * n);
    for (int i = 0; i < n; ++i) out.segment(i * n, n) = vs[i];
    return out;
  };
  std::vector<Eigen::VectorXd> orbit;
  std::vector<std::vector<Eigen::VectorXd>> frames;
  frames.push_back(chart.chamber_vertices);
  orbit.push_back(flatten(frames[0]));
  for (std::size_t head = 0; head < frames.size(); ++head) {
    for (const auto& r : chart.reflections) {
      std::vector<Eigen::VectorXd> img;
      img.reserve(n);
      for (const auto& v : frames[head]) img.push_back(r * v);
      Eigen::VectorXd key = flatten(img);
      if (find_vector(orbit, key) < 0) {
        orbit.push_back(key);
        frames.push_back(std::move(img));
        if (orbit.size() > cap) throw std::runtime_error("chamber_orbit_size: cap exceeded");
      }
    }
  }
  return orbit.size();
}

}  // namespace bldg
