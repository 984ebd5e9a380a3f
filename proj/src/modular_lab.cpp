#include "cftspec/modular_lab.hpp"

#include "cftspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cftspec::lab {

namespace {

using std::abs;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T>
Mat<T> identity(int n) {
  return Mat<T>::Identity(n, n);
}

template <class T>
Cx<T> phase(const T& x) {
  return Cx<T>(cos(x), sin(x));
}

template <class T>
T norm_of(const Mat<T>& x) {
  return x.norm();
}

template <class T>
T real_trace(const Mat<T>& x) {
  return x.trace().real();
}

// Sample times for flow checks.
template <class T>
std::vector<T> sample_times() {
  return {T(37) / 100, T(-121) / 100};
}

std::string dims_text(const Triple& t) {
  std::ostringstream os;
  os << "(" << t.d1 << ", " << t.d2 << ", " << t.d3 << ")";
  return os.str();
}

}  // namespace

void Triple::validate() const {
  if (d1 < 1 || d2 < 1 || d3 < 1)
    throw Error(ErrorKind::InvalidArgument, "triple dimensions must be >= 1");
}

Split Split::commutant() const {
  return Split{left, right, algebra == Side::Left ? Side::Right : Side::Left};
}

template <class T>
HermitianEig<T> hermitian_eig(const Mat<T>& a) {
  const Mat<T> h = (a + a.adjoint()) / T(2);
  Eigen::SelfAdjointEigenSolver<Mat<T>> es(h);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::InvalidArgument, "eigensolver failed");
  return HermitianEig<T>{es.eigenvalues(), es.eigenvectors()};
}

template <class T>
Mat<T> apply_function(const HermitianEig<T>& e, const std::function<Cx<T>(const T&)>& f) {
  const auto n = e.values.size();
  Vec<T> d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = f(e.values(i));
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

template <class T>
Mat<T> matrix_log(const Mat<T>& a) {
  return apply_function<T>(hermitian_eig(a), [](const T& x) { return Cx<T>(log(x)); });
}

template <class T>
Mat<T> matrix_power(const Mat<T>& a, const T& p) {
  return apply_function<T>(hermitian_eig(a), [&](const T& x) { return Cx<T>(exp(p * log(x))); });
}

template <class T>
Mat<T> matrix_it(const Mat<T>& a, const T& t) {
  return apply_function<T>(hermitian_eig(a), [&](const T& x) { return phase(t * log(x)); });
}

template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class T>
Mat<T> trace_left(const Mat<T>& x, int dl, int dr) {
  Mat<T> y = Mat<T>::Zero(dr, dr);
  for (int a = 0; a < dl; ++a) y += x.block(a * dr, a * dr, dr, dr);
  return y;
}

template <class T>
Mat<T> trace_right(const Mat<T>& x, int dl, int dr) {
  Mat<T> y(dl, dl);
  for (int a = 0; a < dl; ++a)
    for (int c = 0; c < dl; ++c) y(a, c) = x.block(a * dr, c * dr, dr, dr).trace();
  return y;
}

template <class T>
void check_density(const Mat<T>& rho, const std::string& what) {
  if (rho.rows() == 0 || rho.rows() != rho.cols())
    throw Error(ErrorKind::InvalidArgument, what + ": density must be a nonempty square matrix");
  const T scale = std::max(T(1), norm_of<T>(rho));
  if (norm_of<T>(Mat<T>(rho - rho.adjoint())) > T(1e-12) * scale)
    throw Error(ErrorKind::InvalidArgument, what + ": density is not Hermitian");
  if (abs(real_trace<T>(rho) - T(1)) > T(1e-12))
    throw Error(ErrorKind::InvalidArgument, what + ": density does not have unit trace");
  const auto e = hermitian_eig(rho);
  const T lo = e.values.minCoeff();
  const T hi = e.values.maxCoeff();
  if (!(lo > 0) || hi / lo > T(kMaxCondition))
    throw Error(ErrorKind::NotSeparating,
                what + ": density is singular or too ill-conditioned (eigenvalue ratio > 1e12)");
}

template <class T>
Mat<T> random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat<T> G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      G(i, j) = Cx<T>(T(re), T(im));
    }
  Mat<T> rho = G * G.adjoint();
  rho /= Cx<T>(real_trace<T>(rho));
  return (rho + rho.adjoint()) / T(2);
}

template <class T>
Mat<T> maximally_mixed(int d) {
  return identity<T>(d) / T(d);
}

template <class T>
Mat<T> embed_R(const Mat<T>& x, const Split& split) {
  return split.algebra == Side::Left ? kron<T>(x, identity<T>(split.right))
                                     : kron<T>(identity<T>(split.left), x);
}

template <class T>
Mat<T> embed_S(const Mat<T>& y, const Split& split) {
  return embed_R<T>(y, split.commutant());
}

template <class T>
Projection<T> project_S(const Mat<T>& x, const Split& split) {
  Projection<T> p;
  if (split.algebra == Side::Left)
    p.part = trace_left<T>(x, split.left, split.right) / T(split.left);
  else
    p.part = trace_right<T>(x, split.left, split.right) / T(split.right);
  p.residual = norm_of<T>(Mat<T>(x - embed_S<T>(p.part, split)));
  return p;
}

template <class T>
Mat<T> spatial_derivative(const Mat<T>& rho_R, const Mat<T>& rho_S, const Split& split) {
  check_density<T>(rho_R, "state on R");
  check_density<T>(rho_S, "state on the commutant");
  if (rho_R.rows() != split.dim_R() || rho_S.rows() != split.dim_S())
    throw Error(ErrorKind::InvalidArgument, "density size does not match the split");
  const Mat<T> inv = matrix_power<T>(rho_S, T(-1));
  return split.algebra == Side::Left ? kron<T>(rho_R, inv) : kron<T>(inv, rho_R);
}

template <class T>
SpatialCheck<T> check_spatial_derivative(const Mat<T>& D, const Mat<T>& rho_R, const Mat<T>& rho_S,
                                         const Split& split, const T& t) {
  const auto e = hermitian_eig(D);
  const Mat<T> Dit = apply_function<T>(e, [&](const T& x) { return phase(t * log(x)); });
  const Mat<T> Dmit = Dit.adjoint();
  const Mat<T> uR = matrix_it<T>(rho_R, t);
  const Mat<T> uS = matrix_it<T>(rho_S, t);
  SpatialCheck<T> out{T(0), T(0), T(0)};
  const int dR = split.dim_R();
  for (int a = 0; a < dR; ++a)
    for (int b = 0; b < dR; ++b) {
      Mat<T> x = Mat<T>::Zero(dR, dR);
      x(a, b) = 1;
      const Mat<T> lhs = Dit * embed_R<T>(x, split) * Dmit;
      const Mat<T> rhs = embed_R<T>(Mat<T>(uR * x * uR.adjoint()), split);
      out.modular_R = std::max(out.modular_R, norm_of<T>(Mat<T>(lhs - rhs)));
    }
  const int dS = split.dim_S();
  for (int a = 0; a < dS; ++a)
    for (int b = 0; b < dS; ++b) {
      Mat<T> y = Mat<T>::Zero(dS, dS);
      y(a, b) = 1;
      const Mat<T> lhs = Dmit * embed_S<T>(y, split) * Dit;
      const Mat<T> rhs = embed_S<T>(Mat<T>(uS * y * uS.adjoint()), split);
      out.modular_S = std::max(out.modular_S, norm_of<T>(Mat<T>(lhs - rhs)));
    }
  const Mat<T> dual = spatial_derivative<T>(rho_S, rho_R, split.commutant());
  out.inverse = norm_of<T>(Mat<T>(D * dual - identity<T>(static_cast<int>(D.rows()))));
  return out;
}

template <class T>
Cocycle<T> connes_cocycle(const Mat<T>& rho_psi, const Mat<T>& rho_psi0, const Split& split,
                          const T& t, const Mat<T>& rho_phi) {
  const Mat<T> phi = rho_phi.size() == 0 ? maximally_mixed<T>(split.dim_R()) : rho_phi;
  const Mat<T> D = spatial_derivative<T>(phi, rho_psi, split);
  const Mat<T> D0 = spatial_derivative<T>(phi, rho_psi0, split);
  const Mat<T> full = matrix_it<T>(D, -t) * matrix_it<T>(D0, t);
  const auto p = project_S<T>(full, split);
  const int n = static_cast<int>(full.rows());
  if (p.residual > Tolerances<T>::membership() * T(n))
    throw Error(ErrorKind::Cocycle, "cocycle product is not in the commutant (residual " +
                                        std::to_string(to_double(p.residual)) + ")");
  return Cocycle<T>{p.part, p.residual};
}

template <class T>
CocycleCheck<T> check_cocycle(const Mat<T>& rho_psi, const Mat<T>& rho_psi0, const Mat<T>& rho_phi,
                              const Split& split, const T& t, const T& s) {
  CocycleCheck<T> out;
  const auto direct = [&](const T& tau) {
    return Mat<T>(matrix_it<T>(rho_psi, tau) * matrix_it<T>(rho_psi0, -tau));
  };
  const Mat<T> ut = direct(t);
  const Mat<T> us = direct(s);
  const Mat<T> uts = direct(t + s);
  const int dS = split.dim_S();
  out.unitarity = norm_of<T>(Mat<T>(ut * ut.adjoint() - identity<T>(dS)));
  const Mat<T> w = matrix_it<T>(rho_psi0, t);
  out.cocycle = norm_of<T>(Mat<T>(uts - ut * w * us * w.adjoint()));
  const auto c = connes_cocycle<T>(rho_psi, rho_psi0, split, t, rho_phi);
  out.membership = c.membership;
  const Mat<T> D = spatial_derivative<T>(rho_phi, rho_psi, split);
  const Mat<T> D0 = spatial_derivative<T>(rho_phi, rho_psi0, split);
  out.reconstruction =
      norm_of<T>(Mat<T>(matrix_it<T>(D0, t) - matrix_it<T>(D, t) * embed_S<T>(ut, split)));
  return out;
}

template <class T>
FlowGenerator<T> FlowGenerator<T>::from(const Mat<T>& K) {
  FlowGenerator f;
  f.K = (K + K.adjoint()) / T(2);
  f.eig = hermitian_eig<T>(f.K);
  return f;
}

template <class T>
Mat<T> FlowGenerator<T>::V(const T& t) const {
  return apply_function<T>(eig, [&](const T& x) { return phase(t * x); });
}

template <class T>
Mat<T> FlowGenerator<T>::exp_K(const T& s) const {
  return apply_function<T>(eig, [&](const T& x) { return Cx<T>(exp(s * x)); });
}

template <class T>
FlowGenerator<T> product_flow(const Triple& triple, const Mat<T>& rho1, const Mat<T>& rho3,
                              const T& c) {
  triple.validate();
  check_density<T>(rho1, "phi1");
  check_density<T>(rho3, "phi2");
  if (rho1.rows() != triple.d1 || rho3.rows() != triple.d3)
    throw Error(ErrorKind::InvalidArgument, "density sizes do not match the triple");
  const Mat<T> L1 = kron<T>(matrix_log<T>(rho1), identity<T>(triple.d2 * triple.d3));
  const Mat<T> L3 = kron<T>(identity<T>(triple.d1 * triple.d2), matrix_log<T>(rho3));
  return FlowGenerator<T>::from(Mat<T>(L1 - L3 + c * identity<T>(triple.dim())));
}

template <class T>
T flow_hypothesis_residual(const FlowGenerator<T>& flow, int sign, const Mat<T>& rho_R,
                           const Split& split) {
  if (flow.dim() != split.left * split.right)
    throw Error(ErrorKind::InvalidArgument, "flow dimension does not match the split");
  T worst(0);
  for (const T& t : sample_times<T>()) {
    const Mat<T> Y = embed_R<T>(matrix_it<T>(rho_R, -t), split) * flow.V(T(sign) * t);
    worst = std::max(worst, project_S<T>(Y, split).residual);
  }
  return worst;
}

template <class T>
VectorState<T> VectorState<T>::make(const Vec<T>& xi, const Split& split) {
  if (xi.size() != split.left * split.right)
    throw Error(ErrorKind::InvalidArgument, "vector size does not match the split");
  VectorState v;
  v.split = split;
  v.xi = xi / xi.norm();
  // xi(a * right + b) = X(a, b)
  Mat<T> X(split.left, split.right);
  for (int a = 0; a < split.left; ++a)
    for (int b = 0; b < split.right; ++b) X(a, b) = v.xi(a * split.right + b);
  const Mat<T> rl = X * X.adjoint();
  const Mat<T> rr = X.transpose() * X.conjugate();
  v.rho_R = split.algebra == Side::Left ? rl : rr;
  v.rho_S = split.algebra == Side::Left ? rr : rl;
  check_density<T>(v.rho_R, "vector state on R");
  check_density<T>(v.rho_S, "vector state on the commutant");
  return v;
}

template <class T>
T weight_total_mass(const FlowGenerator<T>& flow, const VectorState<T>& phi) {
  const T res = flow_hypothesis_residual<T>(flow, 1, phi.rho_R, phi.split);
  if (res > Tolerances<T>::membership() * T(flow.dim()))
    throw Error(ErrorKind::HypothesisViolation,
                "Ad V(t) is not the modular group of the state on R (residual " +
                    std::to_string(to_double(res)) + ")");
  const Vec<T> y = flow.exp_K(T(-1)) * phi.xi;
  return phi.xi.dot(y).real();
}

template <class T>
T weight_total_mass(const FlowGenerator<T>& flow, int sign, const Mat<T>& rho_R,
                    const Mat<T>& sigma_S, const Split& split) {
  const T res = flow_hypothesis_residual<T>(flow, sign, rho_R, split);
  if (res > Tolerances<T>::membership() * T(flow.dim()))
    throw Error(ErrorKind::HypothesisViolation,
                "Ad V(t) is not the modular group of the state on R (residual " +
                    std::to_string(to_double(res)) + ")");
  const Mat<T> D0 = spatial_derivative<T>(rho_R, sigma_S, split);
  const Mat<T> X = flow.exp_K(T(-sign)) * D0;
  const auto p = project_S<T>(X, split);
  if (p.residual > Tolerances<T>::membership() * std::max(T(1), norm_of<T>(X)) * T(flow.dim()))
    throw Error(ErrorKind::Cocycle, "continued cocycle is not in the commutant");
  return real_trace<T>(Mat<T>(sigma_S * p.part));
}

template <class T>
IndexReport<T> index_product(const Triple& triple, const Mat<T>& rho1, const Mat<T>& rho3,
                             const FlowGenerator<T>& flow, const Mat<T>& sigma_M1,
                             const Mat<T>& sigma_M2) {
  triple.validate();
  if (flow.dim() != triple.dim())
    throw Error(ErrorKind::InvalidArgument, "flow dimension does not match the triple");
  const Split s2{triple.d1, triple.d2 * triple.d3, Side::Left};   // R = N1, S = M2
  const Split s1{triple.d1 * triple.d2, triple.d3, Side::Right};  // R = N2, S = M1
  const Mat<T> m1 = sigma_M1.size() == 0 ? maximally_mixed<T>(triple.d1 * triple.d2) : sigma_M1;
  const Mat<T> m2 = sigma_M2.size() == 0 ? maximally_mixed<T>(triple.d2 * triple.d3) : sigma_M2;
  IndexReport<T> r;
  r.hypothesis = std::max(flow_hypothesis_residual<T>(flow, 1, rho1, s2),
                          flow_hypothesis_residual<T>(flow, -1, rho3, s1));
  r.psi2 = weight_total_mass<T>(flow, 1, rho1, m2, s2);
  r.psi1 = weight_total_mass<T>(flow, -1, rho3, m1, s1);
  r.product = r.psi1 * r.psi2;
  return r;
}

template <class T>
T araki_relative_entropy(const Mat<T>& rho1, const Mat<T>& rho2) {
  check_density<T>(rho1, "first state");
  check_density<T>(rho2, "second state");
  if (rho1.rows() != rho2.rows()) throw Error(ErrorKind::InvalidArgument, "state sizes differ");
  const int d = static_cast<int>(rho1.rows());
  // Delta_{xi2, xi1} X = rho2 X rho1^{-1}; column-major vec(A X B) = (B^T (x) A) vec X.
  const Mat<T> inv1 = matrix_power<T>(rho1, T(-1));
  const Mat<T> Delta = kron<T>(Mat<T>(inv1.transpose()), rho2);
  const Mat<T> root = matrix_power<T>(rho1, T(1) / T(2));
  const Vec<T> xi = Eigen::Map<const Vec<T>>(root.data(), d * d);
  const Vec<T> y = matrix_log<T>(Delta) * xi;
  return -xi.dot(y).real();
}

double pimsner_popa_entropy(const Triple& triple) {
  triple.validate();
  return std::log(static_cast<double>(triple.d2) * triple.d2);
}

template <class T>
Mat<T> expectation_density_M1(const Triple& triple, const Mat<T>& rho1) {
  return kron<T>(rho1, maximally_mixed<T>(triple.d2));
}

template <class T>
Mat<T> expectation_density_M2(const Triple& triple, const Mat<T>& rho3) {
  return kron<T>(maximally_mixed<T>(triple.d2), rho3);
}

template <class T>
Mat<T> generator_from_expectation(const Triple& triple, const Mat<T>& rho1, const Mat<T>& rho3,
                                  int orientation) {
  const Split split{triple.d1 * triple.d2, triple.d3, Side::Left};
  const Mat<T> D = spatial_derivative<T>(expectation_density_M1<T>(triple, rho1), rho3, split);
  const T half_log_index = log(T(triple.d2) * T(triple.d2)) / T(2);
  return T(orientation) * matrix_log<T>(D) + half_log_index * identity<T>(triple.dim());
}

template <class T>
Mat<T> swap_outer(const Triple& triple) {
  const int n = triple.dim();
  Mat<T> P = Mat<T>::Zero(n, n);
  for (int a = 0; a < triple.d1; ++a)
    for (int b = 0; b < triple.d2; ++b)
      for (int c = 0; c < triple.d3; ++c) {
        const int from = (a * triple.d2 + b) * triple.d3 + c;
        const int to = (c * triple.d2 + b) * triple.d1 + a;
        P(to, from) = 1;
      }
  return P;
}

template <class T>
DerivativeReport<T> entropy_derivative_identity(const Triple& triple, const Mat<T>& rho,
                                                const Mat<T>& sigma0, const T& step) {
  triple.validate();
  if (triple.d1 != triple.d3)
    throw Error(ErrorKind::InvalidArgument, "derivative identity needs a symmetric triple d1 = d3");
  if (rho.rows() != triple.d1 || sigma0.rows() != triple.d2 * triple.d3)
    throw Error(ErrorKind::InvalidArgument, "density sizes do not match the triple");
  check_density<T>(sigma0, "psi0");
  const auto flow = product_flow<T>(triple, rho, rho, T(0));
  const Split split{triple.d1, triple.d2 * triple.d3, Side::Left};
  const auto De = hermitian_eig<T>(spatial_derivative<T>(rho, sigma0, split));

  const auto Z = [&](const T& t) {
    const Mat<T> Dt = apply_function<T>(De, [&](const T& x) { return Cx<T>(exp(t * log(x))); });
    const auto p = project_S<T>(Mat<T>(flow.exp_K(-t) * Dt), split);
    return real_trace<T>(Mat<T>(sigma0 * p.part));
  };
  const auto f = [&](const T& t) { return t * log(Z(t)); };

  DerivativeReport<T> r;
  r.step = step > 0 ? step : T(1) / T(1000);
  const T h = r.step;
  const T d_h = (f(1 + h) - f(1 - h)) / (2 * h);
  const T d_h2 = (f(1 + h / 2) - f(1 - h / 2)) / h;
  r.derivative = (4 * d_h2 - d_h) / 3;
  r.z_at_1 = Z(T(1));
  r.sqrt_index = T(triple.d2);
  r.log_index = log(T(triple.d2) * T(triple.d2));
  r.s_rel = araki_relative_entropy<T>(expectation_density_M2<T>(triple, rho), sigma0);
  r.expected = r.log_index + r.s_rel;
  r.printed = r.log_index - r.s_rel;
  r.deviation = abs(r.derivative - r.expected);
  r.printed_deviation = abs(r.derivative - r.printed);

  const Mat<T> K46 = generator_from_expectation<T>(triple, rho, rho, 1);
  r.generator_residual = norm_of<T>(Mat<T>(K46 - flow.K));
  r.generator_restriction =
      flow_hypothesis_residual<T>(FlowGenerator<T>::from(K46), 1, rho, split);
  r.flipped_restriction = flow_hypothesis_residual<T>(
      FlowGenerator<T>::from(generator_from_expectation<T>(triple, rho, rho, -1)), 1, rho, split);

  if (abs(r.z_at_1 - r.sqrt_index) > T(1e-8))
    throw Error(ErrorKind::IdentityViolation,
                "Z(1) = " + std::to_string(to_double(r.z_at_1)) + " differs from Ind^(1/2) on " +
                    dims_text(triple));
  if (r.deviation > T(1e-6))
    throw Error(ErrorKind::IdentityViolation,
                "d/dt [t log Z] = " + std::to_string(to_double(r.derivative)) +
                    " differs from log Ind + S = " + std::to_string(to_double(r.expected)));
  return r;
}

#define CFTSPEC_LAB_INSTANTIATE(T)                                                              \
  template HermitianEig<T> hermitian_eig<T>(const Mat<T>&);                                     \
  template Mat<T> apply_function<T>(const HermitianEig<T>&, const std::function<Cx<T>(const T&)>&); \
  template Mat<T> matrix_log<T>(const Mat<T>&);                                                 \
  template Mat<T> matrix_power<T>(const Mat<T>&, const T&);                                     \
  template Mat<T> matrix_it<T>(const Mat<T>&, const T&);                                        \
  template Mat<T> kron<T>(const Mat<T>&, const Mat<T>&);                                        \
  template Mat<T> trace_left<T>(const Mat<T>&, int, int);                                       \
  template Mat<T> trace_right<T>(const Mat<T>&, int, int);                                      \
  template void check_density<T>(const Mat<T>&, const std::string&);                            \
  template Mat<T> random_density<T>(int, std::mt19937_64&);                                     \
  template Mat<T> maximally_mixed<T>(int);                                                      \
  template Mat<T> embed_R<T>(const Mat<T>&, const Split&);                                      \
  template Mat<T> embed_S<T>(const Mat<T>&, const Split&);                                      \
  template Projection<T> project_S<T>(const Mat<T>&, const Split&);                             \
  template Mat<T> spatial_derivative<T>(const Mat<T>&, const Mat<T>&, const Split&);            \
  template SpatialCheck<T> check_spatial_derivative<T>(const Mat<T>&, const Mat<T>&,            \
                                                       const Mat<T>&, const Split&, const T&);  \
  template Cocycle<T> connes_cocycle<T>(const Mat<T>&, const Mat<T>&, const Split&, const T&,   \
                                        const Mat<T>&);                                         \
  template CocycleCheck<T> check_cocycle<T>(const Mat<T>&, const Mat<T>&, const Mat<T>&,        \
                                            const Split&, const T&, const T&);                  \
  template struct FlowGenerator<T>;                                                             \
  template FlowGenerator<T> product_flow<T>(const Triple&, const Mat<T>&, const Mat<T>&,        \
                                            const T&);                                          \
  template T flow_hypothesis_residual<T>(const FlowGenerator<T>&, int, const Mat<T>&,           \
                                         const Split&);                                         \
  template struct VectorState<T>;                                                               \
  template T weight_total_mass<T>(const FlowGenerator<T>&, const VectorState<T>&);              \
  template T weight_total_mass<T>(const FlowGenerator<T>&, int, const Mat<T>&, const Mat<T>&,   \
                                  const Split&);                                                \
  template IndexReport<T> index_product<T>(const Triple&, const Mat<T>&, const Mat<T>&,         \
                                           const FlowGenerator<T>&, const Mat<T>&,              \
                                           const Mat<T>&);                                      \
  template T araki_relative_entropy<T>(const Mat<T>&, const Mat<T>&);                           \
  template Mat<T> expectation_density_M1<T>(const Triple&, const Mat<T>&);                      \
  template Mat<T> expectation_density_M2<T>(const Triple&, const Mat<T>&);                      \
  template Mat<T> generator_from_expectation<T>(const Triple&, const Mat<T>&, const Mat<T>&,    \
                                                int);                                           \
  template Mat<T> swap_outer<T>(const Triple&);                                                 \
  template DerivativeReport<T> entropy_derivative_identity<T>(const Triple&, const Mat<T>&,     \
                                                              const Mat<T>&, const T&);

CFTSPEC_LAB_INSTANTIATE(double)
CFTSPEC_LAB_INSTANTIATE(Quad)

nlohmann::json identity_json(const std::string& identity, double lhs, double rhs,
                             const Triple& triple, std::uint64_t seed) {
  return nlohmann::json{{"identity", identity},
                        {"lhs", lhs},
                        {"rhs", rhs},
                        {"abs_dev", std::fabs(lhs - rhs)},
                        {"dims", {triple.d1, triple.d2, triple.d3}},
                        {"seed", seed}};
}

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

struct Worst {
  double dev = -1;
  nlohmann::json entry;

  void offer(const std::string& id, double lhs, double rhs, const Triple& t, std::uint64_t seed) {
    const double d = std::fabs(lhs - rhs);
    if (d > dev) {
      dev = d;
      entry = identity_json(id, lhs, rhs, t, seed);
    }
  }
};

}  // namespace

BatterySummary index_battery(std::uint64_t seed, int max_leg, int seeds) {
  BatterySummary out;
  Worst worst;
  long cases = 0;
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  for (int d1 = 1; d1 <= max_leg; ++d1)
    for (int d2 = 1; d2 <= max_leg; ++d2)
      for (int d3 = 1; d3 <= max_leg; ++d3)
        for (int k = 0; k < seeds; ++k) {
          const Triple tr{d1, d2, d3};
          auto rng = case_rng(seed, static_cast<std::uint64_t>(cases));
          const auto rho1 = random_density<double>(d1, rng);
          const auto rho3 = random_density<double>(d3, rng);
          const double c = shift(rng);
          const auto m1 = random_density<double>(d1 * d2, rng);
          const auto m2 = random_density<double>(d2 * d3, rng);
          const auto flow = product_flow<double>(tr, rho1, rho3, c);
          const auto r = index_product<double>(tr, rho1, rho3, flow, m1, m2);
          worst.offer("index_product", r.product, double(d2) * d2, tr, seed);
          ++cases;
        }
  const double tol = 1e-8;
  out.pass = worst.dev <= tol;
  out.report = {{"check", "index_product"}, {"cases", cases}, {"tolerance", tol},
                {"max_abs_dev", worst.dev}, {"worst", worst.entry}, {"pass", out.pass}};
  return out;
}

BatterySummary triple_battery(std::uint64_t seed, const Triple& tr, int seeds) {
  if (tr.d1 < 1 || tr.d2 < 1 || tr.d3 < 1 || seeds < 1)
    throw Error(ErrorKind::InvalidArgument, "leg dimensions and seeds must be >= 1");
  BatterySummary out;
  Worst worst, sym;
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  double value = 0;
  const double d2sq = double(tr.d2) * tr.d2;
  for (int k = 0; k < seeds; ++k) {
    auto rng = case_rng(seed, 200000u + static_cast<std::uint64_t>(k));
    const auto rho1 = random_density<double>(tr.d1, rng);
    const auto rho3 = random_density<double>(tr.d3, rng);
    const double c = shift(rng);
    const auto m1 = random_density<double>(tr.d1 * tr.d2, rng);
    const auto m2 = random_density<double>(tr.d2 * tr.d3, rng);
    const auto r = index_product<double>(tr, rho1, rho3, product_flow<double>(tr, rho1, rho3, c),
                                         m1, m2);
    worst.offer("index_product", r.product, d2sq, tr, seed);
    if (k == 0) value = r.product;
    if (tr.d1 == tr.d3) {
      const auto s = index_product<double>(tr, rho1, rho1,
                                           product_flow<double>(tr, rho1, rho1, 0.0), m1, m2);
      sym.offer("symmetric.psi1", s.psi1, tr.d2, tr, seed);
      sym.offer("symmetric.psi2", s.psi2, tr.d2, tr, seed);
    }
  }
  const double tol = 1e-8;
  out.pass = worst.dev <= tol && sym.dev <= tol;
  out.report = {{"check", "triple_index"}, {"dims", {tr.d1, tr.d2, tr.d3}},
                {"cases", seeds}, {"tolerance", tol}, {"value", value},
                {"expected", d2sq}, {"max_abs_dev", worst.dev}, {"worst", worst.entry}};
  if (tr.d1 == tr.d3)
    out.report["symmetric"] = {{"max_abs_dev", sym.dev}, {"worst", sym.entry}};
  out.report["pass"] = out.pass;
  return out;
}

BatterySummary symmetric_battery(std::uint64_t seed, int max_leg, int seeds) {
  BatterySummary out;
  Worst worst;
  double swap_worst = 0;
  long cases = 0;
  for (int d = 1; d <= max_leg; ++d)
    for (int d2 = 1; d2 <= max_leg + 1; ++d2)
      for (int k = 0; k < seeds; ++k) {
        const Triple tr{d, d2, d};
        auto rng = case_rng(seed, 100000u + static_cast<std::uint64_t>(cases));
        const auto rho = random_density<Quad>(d, rng);
        const auto m1 = random_density<Quad>(d * d2, rng);
        const auto m2 = random_density<Quad>(d2 * d, rng);
        const auto flow = product_flow<Quad>(tr, rho, rho, Quad(0));
        const Mat<Quad> U = swap_outer<Quad>(tr);
        swap_worst = std::max(swap_worst,
                              to_double(Mat<Quad>(U * flow.K * U.adjoint() + flow.K).norm()));
        const auto r = index_product<Quad>(tr, rho, rho, flow, m1, m2);
        worst.offer("symmetric.psi1", to_double(r.psi1), d2, tr, seed);
        worst.offer("symmetric.psi2", to_double(r.psi2), d2, tr, seed);
        ++cases;
      }
  const double tol = 1e-8;
  out.pass = worst.dev <= tol && swap_worst <= 1e-20;
  out.report = {{"check", "symmetric_split"}, {"cases", cases}, {"tolerance", tol},
                {"max_abs_dev", worst.dev}, {"swap_residual", swap_worst},
                {"worst", worst.entry}, {"pass", out.pass}};
  return out;
}

BatterySummary entropy_battery(std::uint64_t seed, int pairs, int max_dim) {
  BatterySummary out;
  Worst worst;
  double min_value = 1e300;
  std::uniform_int_distribution<int> dim(1, max_dim);
  for (int k = 0; k < pairs; ++k) {
    auto rng = case_rng(seed, 200000u + static_cast<std::uint64_t>(k));
    const int d = dim(rng);
    const auto r1 = random_density<Quad>(d, rng);
    const auto r2 = random_density<Quad>(d, rng);
    const Quad araki = araki_relative_entropy<Quad>(r1, r2);
    const Quad oracle = real_trace<Quad>(Mat<Quad>(r1 * (matrix_log<Quad>(r1) - matrix_log<Quad>(r2))));
    worst.offer("ArakiEntropy", to_double(araki), to_double(oracle), Triple{d, 1, 1}, seed);
    min_value = std::min(min_value, to_double(araki));
  }
  const double tol = 1e-12;
  out.pass = worst.dev <= tol && min_value >= -1e-20;
  out.report = {{"check", "araki_relative_entropy"}, {"cases", pairs}, {"tolerance", tol},
                {"max_abs_dev", worst.dev}, {"min_value", min_value},
                {"worst", worst.entry}, {"pass", out.pass}};
  return out;
}

BatterySummary cocycle_battery(std::uint64_t seed, int cases, int max_leg) {
  BatterySummary out;
  double spatial = 0, inverse = 0, unitarity = 0, membership = 0, cocycle = 0, recon = 0,
         chain = 0;
  std::uniform_int_distribution<int> leg(1, max_leg);
  std::uniform_real_distribution<double> time(-2.0, 2.0);
  for (int k = 0; k < cases; ++k) {
    auto rng = case_rng(seed, 300000u + static_cast<std::uint64_t>(k));
    const Split split{leg(rng), leg(rng), k % 2 == 0 ? Side::Left : Side::Right};
    const auto phi = random_density<Quad>(split.dim_R(), rng);
    const auto psi = random_density<Quad>(split.dim_S(), rng);
    const auto psi0 = random_density<Quad>(split.dim_S(), rng);
    const auto psi1 = random_density<Quad>(split.dim_S(), rng);
    const Quad t(time(rng));
    const Quad s(time(rng));
    const auto D = spatial_derivative<Quad>(phi, psi, split);
    const auto sc = check_spatial_derivative<Quad>(D, phi, psi, split, t);
    spatial = std::max({spatial, to_double(sc.modular_R), to_double(sc.modular_S)});
    inverse = std::max(inverse, to_double(sc.inverse));
    const auto cc = check_cocycle<Quad>(psi, psi0, phi, split, t, s);
    unitarity = std::max(unitarity, to_double(cc.unitarity));
    membership = std::max(membership, to_double(cc.membership));
    cocycle = std::max(cocycle, to_double(cc.cocycle));
    recon = std::max(recon, to_double(cc.reconstruction));
    const auto a = connes_cocycle<Quad>(psi, psi0, split, t, phi).u;
    const auto b = connes_cocycle<Quad>(psi0, psi1, split, t, phi).u;
    const auto ab = connes_cocycle<Quad>(psi, psi1, split, t, phi).u;
    chain = std::max(chain, to_double(Mat<Quad>(a * b - ab).norm()));
  }
  out.pass = spatial <= 1e-18 && inverse <= 1e-20 && unitarity <= 1e-18 && membership <= 1e-18 &&
             cocycle <= 1e-16 && recon <= 1e-16 && chain <= 1e-16;
  out.report = {{"check", "spatial_derivative_and_cocycles"},
                {"cases", cases},
                {"spatial_residual", spatial},
                {"inverse_residual", inverse},
                {"unitarity", unitarity},
                {"membership", membership},
                {"cocycle_identity", cocycle},
                {"reconstruction", recon},
                {"chain_rule", chain},
                {"max_abs_dev", std::max({cocycle, recon, chain})},
                {"tolerance", 1e-16},
                {"pass", out.pass}};
  return out;
}

BatterySummary derivative_battery(std::uint64_t seed) {
  BatterySummary out;
  nlohmann::json cases = nlohmann::json::array();
  double worst = 0, generator = 0, restriction = 0, mass = 0;
  auto run = [&](const Triple& tr, const Mat<Quad>& rho, const Mat<Quad>& sigma0,
                 const std::string& label) {
    const auto r = entropy_derivative_identity<Quad>(tr, rho, sigma0);
    worst = std::max(worst, to_double(r.deviation));
    generator = std::max(generator, to_double(r.generator_residual));
    restriction = std::max(restriction, to_double(r.generator_restriction));
    mass = std::max(mass, to_double(abs(r.z_at_1 - r.sqrt_index)));
    auto j = identity_json("entropy_derivative", to_double(r.derivative), to_double(r.expected), tr, seed);
    j["setup"] = label;
    j["s_rel"] = to_double(r.s_rel);
    j["log_index"] = to_double(r.log_index);
    j["minus_s_form"] = to_double(r.printed);
    j["minus_s_form_dev"] = to_double(r.printed_deviation);
    j["z_at_1"] = to_double(r.z_at_1);
    j["opposite_orientation_restriction"] = to_double(r.flipped_restriction);
    // Flow parameter with 2 pi kept in K: s = 2 pi t, same derivative at s = 2 pi.
    j["two_pi_convention"] = {{"kms_point", 2 * M_PI}, {"derivative", to_double(r.derivative)}};
    cases.push_back(j);
  };

  {
    auto rng = case_rng(seed, 400000u);
    const Triple tr{2, 3, 2};
    const auto rho = random_density<Quad>(2, rng);
    const auto omega2 = random_density<Quad>(3, rng);
    run(tr, rho, kron<Quad>(omega2, rho), "product");
  }
  {
    const Triple tr{2, 3, 2};
    run(tr, maximally_mixed<Quad>(2), maximally_mixed<Quad>(6), "tracial");
  }
  {
    auto rng = case_rng(seed, 400001u);
    const Triple tr{2, 1, 2};
    const auto rho = random_density<Quad>(2, rng);
    run(tr, rho, rho, "trivial_inclusion");
  }
  int k = 0;
  for (const Triple tr : {Triple{1, 2, 1}, Triple{2, 2, 2}, Triple{3, 2, 3}}) {
    auto rng = case_rng(seed, 400010u + static_cast<std::uint64_t>(k++));
    const auto rho = random_density<Quad>(tr.d1, rng);
    run(tr, rho, random_density<Quad>(tr.d2 * tr.d3, rng), "entangled_reference");
  }
  out.pass = worst <= 1e-6 && mass <= 1e-8 && generator <= 1e-16 && restriction <= 1e-16;
  out.report = {{"check", "derivative_identity"},
                {"cases", cases},
                {"max_abs_dev", worst},
                {"tolerance", 1e-6},
                {"mass_dev", mass},
                {"generator_residual", generator},
                {"generator_restriction", restriction},
                {"pass", out.pass}};
  return out;
}

}  // namespace cftspec::lab
