#include "qsl/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace qsl {

// ---------------------------------------------------------------- NormOrder

NormOrder NormOrder::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidOrder, "Schatten order must satisfy p >= 1, got " + std::to_string(p));
  }
  return NormOrder(p);
}

NormOrder NormOrder::infinity() noexcept { return NormOrder(std::numeric_limits<double>::infinity()); }

NormOrder NormOrder::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidOrder, "cannot parse norm order '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorCode::InvalidOrder, "cannot parse norm order '" + text + "'");
  return finite(p);
}

bool NormOrder::is_infinite() const noexcept { return std::isinf(p_); }

NormOrder NormOrder::conjugate() const {
  if (is_infinite()) return NormOrder(1.0);
  if (p_ == 1.0) return infinity();
  if (p_ == 2.0) return NormOrder(2.0);
  throw Error(ErrorCode::InvalidOrder, "only the conjugate pairs (1,inf), (2,2), (inf,1) are supported");
}

std::string NormOrder::to_string() const {
  if (is_infinite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p_);
  return buf;
}

// ---------------------------------------------------------------- validation

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::NonSquare, std::string(what) + ": expected a non-empty square matrix, got " +
                                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + ": matrix has NaN/Inf entries");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_hermitian(const ComplexMatrix& a, double tol, const char* what) {
  require_square(a, what);
  require_finite(a, what);
  const double defect = hermiticity_defect(a);
  if (defect > tol) {
    throw Error(ErrorCode::NotHermitian, std::string(what) + ": |A - A^dagger|_max = " + std::to_string(defect));
  }
}

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& a) { return max_abs(a - a.adjoint()); }

double unitarity_defect(const ComplexMatrix& u) { return max_abs(u.adjoint() * u - identity(u.cols())); }

// ---------------------------------------------------------------- Jacobi

namespace {

// Cyclic complex Jacobi. Each rotation G = diag(1, e^{-i phi}) * R(theta)
// zeroes the (p,q) pair of the Hermitian working matrix exactly; sweeps stop
// once a full sweep performs no rotation.
void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
  const Index n = a.rows();
  const double frob = a.norm();
  if (frob == 0.0 || n == 1) return;
  const double floor = 1e-18 * frob;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double mag = std::abs(b);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag <= floor || mag <= 0.25 * eps * std::sqrt(std::abs(app * aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const Complex phase = b / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex g00 = c;
        const Complex g01 = s;
        const Complex g10 = -s * std::conj(phase);
        const Complex g11 = c * std::conj(phase);

        // A <- G^dagger A G. Off the (p, q) block only columns p, q change;
        // rows p, q follow by Hermitian symmetry.
        for (Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          const Complex np = akp * g00 + akq * g10;
          const Complex nq = akp * g01 + akq * g11;
          a(k, p) = np;
          a(k, q) = nq;
          a(p, k) = std::conj(np);
          a(q, k) = std::conj(nq);
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        if (v != nullptr) {
          for (Index k = 0; k < n; ++k) {
            const Complex vkp = (*v)(k, p);
            const Complex vkq = (*v)(k, q);
            (*v)(k, p) = vkp * g00 + vkq * g10;
            (*v)(k, q) = vkp * g01 + vkq * g11;
          }
        }
      }
    }
    if (!rotated) break;
  }
}

std::vector<Index> descending_order(const RealVector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return values(i) > values(j); });
  return order;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& a, double hermiticity_tol) {
  require_hermitian(a, hermiticity_tol, "hermitian_eigensystem");
  const Index n = a.rows();
  ComplexMatrix work = hermitian_part(a);
  ComplexMatrix v = identity(n);
  jacobi_diagonalize(work, &v);

  RealVector diag = work.diagonal().real();
  const auto order = descending_order(diag);
  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = diag(order[static_cast<std::size_t>(j)]);
    out.eigenvectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a, double hermiticity_tol) {
  require_hermitian(a, hermiticity_tol, "hermitian_eigenvalues");
  ComplexMatrix work = hermitian_part(a);
  jacobi_diagonalize(work, nullptr);
  RealVector diag = work.diagonal().real();
  std::sort(diag.begin(), diag.end(), std::greater<>());
  return diag;
}

// ---------------------------------------------------------------- norms

RealVector singular_values(const ComplexMatrix& a) {
  require_finite(a, "singular_values");
  const Index m = a.rows();
  const Index n = a.cols();
  const Index k = std::min(m, n);
  if (k == 0) return RealVector(0);
  // Hermitian dilation [[0, A], [A^dagger, 0]] has spectrum {+-sigma_i} plus |m-n| zeros.
  ComplexMatrix dilation = ComplexMatrix::Zero(m + n, m + n);
  dilation.topRightCorner(m, n) = a;
  dilation.bottomLeftCorner(n, m) = a.adjoint();
  const RealVector spectrum = hermitian_eigenvalues(dilation, std::numeric_limits<double>::infinity());
  RealVector sigma(k);
  for (Index i = 0; i < k; ++i) sigma(i) = std::max(0.0, spectrum(i));
  return sigma;
}

namespace {

double norm_of_values(const RealVector& sigma, NormOrder p) {
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  if (p.value() == 1.0) return sigma.sum();
  // Scale by the largest value to avoid overflow for large p.
  double acc = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) acc += std::pow(sigma(i) / top, p.value());
  return top * std::pow(acc, 1.0 / p.value());
}

}  // namespace

double schatten_norm(const ComplexMatrix& a, NormOrder p) { return norm_of_values(singular_values(a), p); }

double skew_hermitian_schatten_norm(const ComplexMatrix& c, NormOrder p) {
  const ComplexMatrix h = -kI * c;
  return norm_of_values(hermitian_eigenvalues(h, std::numeric_limits<double>::infinity()).cwiseAbs(), p);
}

double skew_hermitian_trace_norm(const ComplexMatrix& c) { return skew_hermitian_schatten_norm(c, NormOrder::finite(1)); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_square(b, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix unitary_step(const ComplexMatrix& h, double dt, double hermiticity_tol) {
  const EigenSystem es = hermitian_eigensystem(h, hermiticity_tol);
  const Index n = es.eigenvalues.size();
  ComplexMatrix scaled = es.eigenvectors;
  for (Index j = 0; j < n; ++j) scaled.col(j) *= std::exp(-kI * (es.eigenvalues(j) * dt));
  return scaled * es.eigenvectors.adjoint();
}

ComplexMatrix haar_random_unitary(Index dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "haar_random_unitary: dim must be >= 1");
  const ComplexMatrix z = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0 ? d / mag : Complex(1.0));
  }
  return q;
}

// ---------------------------------------------------------------- constructors

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

ComplexMatrix random_hermitian(Index dim, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ stream) ^ counter);
}

}  // namespace qsl
