#pragma once

// Step-two Carnot groups in block-diagonal coordinates.
//
// The horizontal layer has dimension 2n and is split into n planar blocks
// (z_{2i-1}, z_{2i}). Vertical direction j couples to block i with weight
// lambda_i^{(j)}; the left-invariant frame is
//
//   X_{2i-1} = d/dz_{2i-1} + sum_j (lambda_i^{(j)} / 2) z_{2i}   d/dt_j
//   X_{2i}   = d/dz_{2i}   - sum_j (lambda_i^{(j)} / 2) z_{2i-1} d/dt_j
//
// and the group law is (z, t) o (w, s) = (z + w, t + s + B(z, w) / 2) with
// B_j(z, w) = sum_i lambda_i^{(j)} (z_{2i} w_{2i-1} - z_{2i-1} w_{2i}).
// Indices in code are 0-based: block i owns components 2i and 2i+1.

#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace carnot {

inline constexpr int kMaxHorizontal = 16;
inline constexpr int kMaxVertical = 8;

template <typename Scalar>
using HorizontalT =
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxHorizontal, 1>;
template <typename Scalar>
using VerticalT =
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxVertical, 1>;

// Components in the orthonormal frame X_1..X_{2n}; the Euclidean norm of the
// components is the horizontal norm.
using HVector = HorizontalT<double>;
using VVector = VerticalT<double>;

template <typename Scalar>
struct PointT {
  HorizontalT<Scalar> z;
  VerticalT<Scalar> t;
};
using Point = PointT<double>;

// Convenience constructor for the common single-vertical case.
Point make_point(std::initializer_list<double> z, std::initializer_list<double> t);

class StepTwoGroup {
 public:
  // couplings is h x n: row j holds lambda_1^{(j)} .. lambda_n^{(j)}.
  // selected_blocks (0-based, size h) picks the blocks whose coupling matrix
  // A_{kj} = lambda_{i_k}^{(j)} is inverted by the general Z_d construction.
  StepTwoGroup(Eigen::MatrixXd couplings, std::vector<int> selected_blocks,
               std::string label = "general");

  static StepTwoGroup heisenberg(int n);
  static StepTwoGroup single_vertical(const Eigen::VectorXd& lambdas);
  static StepTwoGroup heisenberg_product(int n, int factors);

  int blocks() const { return static_cast<int>(couplings_.cols()); }
  int horizontal_dim() const { return 2 * blocks(); }
  int vertical_dim() const { return static_cast<int>(couplings_.rows()); }
  // Homogeneous dimension 2n + 2h.
  double homogeneous_dimension() const {
    return 2.0 * blocks() + 2.0 * vertical_dim();
  }
  const Eigen::MatrixXd& couplings() const { return couplings_; }
  // Block eigenvalues for single-vertical groups (row 0 of the couplings).
  Eigen::VectorXd lambdas() const { return couplings_.row(0).transpose(); }
  const std::vector<int>& selected_blocks() const { return selected_; }
  // A_{kj} = lambda_{i_k}^{(j)}.
  Eigen::MatrixXd selection_matrix() const;
  const std::string& label() const { return label_; }

  // True when h = 1 and every lambda_i equals 4.
  bool is_heisenberg() const;

  // Coefficient of d/dt_j in X_k at z: the matrix C(z) with
  // X_k = d/dz_k + sum_j C_{kj}(z) d/dt_j.
  Eigen::MatrixXd frame_vertical(const HVector& z) const;

  void check_point(const Point& x) const;

 private:
  Eigen::MatrixXd couplings_;
  std::vector<int> selected_;
  std::string label_;
};

// Bilinear vertical term B(z, w) (one entry per vertical direction).
template <typename Scalar>
VerticalT<Scalar> bilinear_form(const StepTwoGroup& g,
                                const HorizontalT<Scalar>& z,
                                const HorizontalT<Scalar>& w) {
  VerticalT<Scalar> out = VerticalT<Scalar>::Zero(g.vertical_dim());
  for (int j = 0; j < g.vertical_dim(); ++j)
    for (int i = 0; i < g.blocks(); ++i)
      out[j] += Scalar(g.couplings()(j, i)) *
                (z[2 * i + 1] * w[2 * i] - z[2 * i] * w[2 * i + 1]);
  return out;
}

template <typename Scalar>
PointT<Scalar> group_law(const StepTwoGroup& g, const PointT<Scalar>& x,
                         const PointT<Scalar>& y) {
  if (x.z.size() != g.horizontal_dim() || y.z.size() != g.horizontal_dim() ||
      x.t.size() != g.vertical_dim() || y.t.size() != g.vertical_dim())
    throw std::invalid_argument("group_law: dimension mismatch");
  PointT<Scalar> out;
  out.z = x.z + y.z;
  out.t = x.t + y.t + Scalar(0.5) * bilinear_form<Scalar>(g, x.z, y.z);
  return out;
}

template <typename Scalar>
PointT<Scalar> group_inverse(const PointT<Scalar>& x) {
  return {-x.z, -x.t};
}

template <typename Scalar>
PointT<Scalar> dilate(Scalar gamma, const PointT<Scalar>& x) {
  if (!(gamma > Scalar(0)))
    throw std::invalid_argument("dilate: gamma must be positive");
  return {gamma * x.z, gamma * gamma * x.t};
}

template <typename Scalar>
PointT<Scalar> dilate(const StepTwoGroup& g, Scalar gamma, const PointT<Scalar>& x) {
  g.check_point(x);
  return dilate(gamma, x);
}

// Smallest block eigenvalue, i.e. the smallest eigenvalue of (-B^2)^{1/2}.
double lambda_min(const StepTwoGroup& g);

// A scalar field with optional analytic horizontal gradient and vertical
// derivatives.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<HVector(const Point&)> hgrad;
  std::function<VVector(const Point&)> dt;
};

struct DiffScheme {
  enum class Kind { analytic, central_fd };
  Kind kind = Kind::central_fd;
  // <= 0 selects the default 1e-5 * max(1, |x|).
  double step = 0.0;

  static DiffScheme analytic() { return {Kind::analytic, 0.0}; }
  static DiffScheme fd(double step = 0.0) { return {Kind::central_fd, step}; }
};

double default_fd_step(const Point& x);

// Ambient tangent vector of X_k at x.
Point frame_vector(const StepTwoGroup& g, int k, const Point& x);

// Central difference of f at x along the ambient vector v.
double directional_fd(const std::function<double(const Point&)>& f,
                      const Point& x, const Point& v, double step);

HVector horizontal_gradient(const StepTwoGroup& g, const ScalarField& u,
                            const Point& x, DiffScheme scheme = DiffScheme::fd());

VVector vertical_derivative(const StepTwoGroup& g, const ScalarField& u,
                            const Point& x, DiffScheme scheme = DiffScheme::fd());

// Horizontal gradient from ambient partials: X_k u = du/dz_k + C(z) du/dt.
HVector assemble_hgrad(const StepTwoGroup& g, const HVector& z,
                       const HVector& grad_z, const VVector& grad_t);

// Euclidean z-gradient recovered from the horizontal gradient.
HVector ambient_z_gradient(const StepTwoGroup& g, const HVector& z,
                           const HVector& hgrad, const VVector& grad_t);

// Euler field <z, grad_z u> + 2 <t, d_t u> from horizontal data.
double euler_from_jet(const StepTwoGroup& g, const Point& x, const HVector& hgrad,
                      const VVector& grad_t);

double euler_apply(const StepTwoGroup& g, const ScalarField& u, const Point& x,
                   DiffScheme scheme = DiffScheme::fd());

// sum_k X_k(V_k)(x) by central differences along each frame vector.
double horizontal_divergence(const StepTwoGroup& g,
                             const std::function<HVector(const Point&)>& field,
                             const Point& x, double step = 0.0);

// (X_a X_b - X_b X_a) u at x by nested central differences.
double commutator_apply(const StepTwoGroup& g, const ScalarField& u, int a,
                        int b, const Point& x, double step = 1e-4);

// Block-local gradient and its rotation: for block i,
//   nabla_i u      = (.., X_{2i-1} u, X_{2i} u, ..)
//   nabla_i^perp u = (.., -X_{2i} u,  X_{2i-1} u, ..)
HVector block_perp(const HVector& v, int block);
HVector block_part(const HVector& v, int block);

// B^{-1} v for one vertical direction: block i maps (v1, v2) to
// (-v2, v1) / lambda_i.
HVector apply_B_inverse(const StepTwoGroup& g, const HVector& v);

}  // namespace carnot
