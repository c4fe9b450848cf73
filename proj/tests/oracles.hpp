#pragma once

// Reference implementations for tests. They share no code with the library:
// everything is built from raw Eigen calls and the textbook definitions, and
// they are only meant for tiny sizes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Bits = std::vector<std::uint8_t>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline Eigen::SelfAdjointEigenSolver<Mat> eig(const Mat& m) {
  return Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (m + m.adjoint()));
}

// Eigenvalues below 1e-13 of the largest are treated as exact zeros, so the
// square root of a rank-deficient state has no sqrt(roundoff) noise.
inline Mat psd_sqrt(const Mat& m) {
  const auto es = eig(m);
  const double floor = 1e-13 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd v = es.eigenvalues().unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

inline double entropy(const Mat& m) {
  double h = 0.0;
  for (double v : eig(m).eigenvalues()) {
    if (v > 1e-15) h -= v * std::log2(v);
  }
  return h;
}

// || sqrt(a) sqrt(b) ||_1 from the singular values.
inline double root_fidelity(const Mat& a, const Mat& b) {
  return Eigen::JacobiSVD<Mat>(psd_sqrt(a) * psd_sqrt(b)).singularValues().sum();
}

inline double holevo(const Mat& r0, const Mat& r1) {
  return entropy(0.5 * (r0 + r1)) - 0.5 * entropy(r0) - 0.5 * entropy(r1);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline Mat diag(std::vector<double> p) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = p[k];
  return m;
}

inline Mat ket_projector(std::complex<double> a, std::complex<double> b) {
  Eigen::VectorXcd v(2);
  v << a, b;
  return v * v.adjoint();
}

// psi0 = |0>, psi1 = c|0> + sqrt(1 - c^2)|1>.
inline std::pair<Mat, Mat> pure_pair(double c) {
  return {ket_projector(1.0, 0.0), ket_projector(c, std::sqrt(1.0 - c * c))};
}

inline std::pair<Mat, Mat> bsc_pair(double p) { return {diag({1 - p, p}), diag({p, 1 - p})}; }
inline std::pair<Mat, Mat> bec_pair(double e) { return {diag({1 - e, e, 0}), diag({0, e, 1 - e})}; }

// Explicit G_N = B_N F^(x)n as a 0/1 matrix.
inline std::vector<Bits> generator(std::size_t len) {
  std::vector<Bits> f{{1}};
  while (f.size() < len) {
    const std::size_t m = f.size();
    std::vector<Bits> g(2 * m, Bits(2 * m, 0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        g[i][j] = f[i][j];          // [F 0]
        g[m + i][j] = f[i][j];      // [F F]
        g[m + i][m + j] = f[i][j];
      }
    }
    f = std::move(g);
  }
  unsigned n = 0;
  while ((std::size_t{1} << n) < len) ++n;
  std::vector<Bits> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::size_t r = 0;
    for (unsigned b = 0; b < n; ++b) r |= ((i >> b) & 1) << (n - 1 - b);
    out[i] = f[r];
  }
  return out;
}

inline Bits encode(const Bits& u) {
  const auto g = generator(u.size());
  Bits x(u.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < u.size(); ++j) x[j] ^= g[i][j];
  }
  return x;
}

inline Bits bits_of(std::uint64_t v, std::size_t len) {
  Bits b(len);
  for (std::size_t k = 0; k < len; ++k) b[k] = static_cast<std::uint8_t>((v >> (len - 1 - k)) & 1);
  return b;
}

inline Mat codeword_state(const Mat& r0, const Mat& r1, const Bits& x) {
  Mat out = x[0] ? r1 : r0;
  for (std::size_t k = 1; k < x.size(); ++k) out = kron(out, x[k] ? r1 : r0);
  return out;
}

// 2^-(N-i) sum over u_{i+1..N} of rho_{u G_N}, for the given u_1..u_i.
inline Mat averaged_state(const Mat& r0, const Mat& r1, std::size_t len, const Bits& head) {
  const std::size_t future = len - head.size();
  Mat sum;
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << future); ++f) {
    Bits u = head;
    const Bits tail = bits_of(f, future);
    u.insert(u.end(), tail.begin(), tail.end());
    const Mat s = codeword_state(r0, r1, encode(u));
    sum = f == 0 ? s : Mat(sum + s);
  }
  return sum / static_cast<double>(std::uint64_t{1} << future);
}

struct Params {
  double holevo;
  double root_fidelity;
};

// W_N^(i) (1-based i) built straight from its definition: output
// sum_p 2^-(i-1) |p><p| (x) rho_bar(p, u_i), block by block.
inline Params direct_split(const Mat& r0, const Mat& r1, std::size_t len, std::size_t i) {
  const std::size_t prefixes = std::size_t{1} << (i - 1);
  Params out{0.0, 0.0};
  for (std::size_t p = 0; p < prefixes; ++p) {
    Bits head = bits_of(p, i - 1);
    head.push_back(0);
    const Mat a0 = averaged_state(r0, r1, len, head);
    head.back() = 1;
    const Mat a1 = averaged_state(r0, r1, len, head);
    out.holevo += holevo(a0, a1) / static_cast<double>(prefixes);
    out.root_fidelity += root_fidelity(a0, a1) / static_cast<double>(prefixes);
  }
  return out;
}

// Classical Bhattacharyya recursion, children of j at 2j (minus) and 2j+1 (plus).
inline std::vector<double> z_recursion(double z0, unsigned n) {
  std::vector<double> z{z0};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<double> next;
    for (double v : z) {
      next.push_back(2 * v - v * v);
      next.push_back(v * v);
    }
    z = std::move(next);
  }
  return z;
}

// Projector onto eigenvalues >= -1e-10 of m.
inline Mat nonneg_projector(const Mat& m) {
  const auto es = eig(m);
  Mat p = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    if (es.eigenvalues()(k) >= -1e-10) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return p;
}

inline std::pair<Mat, Mat> decision_pair(const Mat& r0, const Mat& r1, std::size_t len, Bits prefix, bool helstrom) {
  prefix.push_back(0);
  const Mat a0 = averaged_state(r0, r1, len, prefix);
  prefix.back() = 1;
  const Mat a1 = averaged_state(r0, r1, len, prefix);
  const Mat p0 = nonneg_projector(helstrom ? Mat(a0 - a1) : Mat(psd_sqrt(a0) - psd_sqrt(a1)));
  return {p0, Mat::Identity(p0.rows(), p0.cols()) - p0};
}

// Block error of the sequential decoder by enumerating every message and
// every outcome branch. info holds 0-based positions; frozen has length N.
inline double brute_block_error(const Mat& r0, const Mat& r1, std::size_t len, const std::vector<std::size_t>& info,
                                const Bits& frozen, bool helstrom = false) {
  std::vector<bool> is_info(len, false);
  for (std::size_t i : info) is_info[i] = true;
  const std::size_t k = info.size();
  double success = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    Bits u = frozen;
    const Bits msg = bits_of(m, k);
    for (std::size_t j = 0; j < k; ++j) u[info[j]] = msg[j];
    struct Leaf {
      Mat rho;
      Bits estimate;
    };
    std::vector<Leaf> leaves{{codeword_state(r0, r1, encode(u)), {}}};
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<Leaf> next;
      for (auto& leaf : leaves) {
        if (!is_info[i]) {
          leaf.estimate.push_back(u[i]);
          next.push_back(std::move(leaf));
          continue;
        }
        const auto [p0, p1] = decision_pair(r0, r1, len, leaf.estimate, helstrom);
        for (int b = 0; b < 2; ++b) {
          const Mat& p = b == 0 ? p0 : p1;
          Leaf child{p * leaf.rho * p, leaf.estimate};
          child.estimate.push_back(static_cast<std::uint8_t>(b));
          next.push_back(std::move(child));
        }
      }
      leaves = std::move(next);
    }
    for (const auto& leaf : leaves) {
      if (leaf.estimate == u) success += leaf.rho.trace().real();
    }
  }
  return 1.0 - success / static_cast<double>(std::uint64_t{1} << k);
}

// Single pure-state decision with overlap c under equal priors.
inline double pure_pair_error(double c) { return 0.5 * (1.0 - std::sqrt(1.0 - c * c)); }

}  // namespace oracle
