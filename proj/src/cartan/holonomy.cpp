#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cartalg/cartan.hpp"
#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

DMatrix from_eigen(const Eigen::MatrixXd& m) {
  DMatrix out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return out;
}

}  // namespace

HolonomyResult holonomy_check(const TMConnection& nabla, const std::vector<double>& point, int i, int j, double h,
                              int steps) {
  const Chart& chart = nabla.chart();
  const int n = chart.dim();
  const int r = nabla.rank();
  if (static_cast<int>(point.size()) != n) throw ShapeError("base point has the wrong dimension");
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw PreconditionError("holonomy plane needs two distinct coordinates");
  if (!(h > 0.0) || steps < 1) throw PreconditionError("holonomy needs a positive side and step count");
  for (int di = 0; di <= 1; ++di) {
    for (int dj = 0; dj <= 1; ++dj) {
      std::vector<double> q = point;
      q[u(i)] += di * h;
      q[u(j)] += dj * h;
      if (!chart.contains(q)) throw PreconditionError("holonomy loop leaves the chart box");
    }
  }
  // Transport matrix H' = -M H with M[b][a] = Gamma(dir)[a][b] along the current edge direction.
  const auto rhs = [&](const std::vector<double>& q, int dir, double sign, const Eigen::MatrixXd& hm) {
    Eigen::MatrixXd m(r, r);
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) m(b, a) = sign * eval(nabla.gamma(dir, a, b), q);
    }
    return Eigen::MatrixXd(-m * hm);
  };
  Eigen::MatrixXd hol = Eigen::MatrixXd::Identity(r, r);
  std::vector<double> q = point;
  const double dt = h / steps;
  const std::vector<std::pair<int, double>> edges{{i, 1.0}, {j, 1.0}, {i, -1.0}, {j, -1.0}};
  for (const auto& [dir, sign] : edges) {
    for (int s = 0; s < steps; ++s) {
      std::vector<double> mid = q;
      mid[u(dir)] += sign * dt / 2;
      std::vector<double> end = q;
      end[u(dir)] += sign * dt;
      const Eigen::MatrixXd k1 = rhs(q, dir, sign, hol);
      const Eigen::MatrixXd k2 = rhs(mid, dir, sign, hol + dt / 2 * k1);
      const Eigen::MatrixXd k3 = rhs(mid, dir, sign, hol + dt / 2 * k2);
      const Eigen::MatrixXd k4 = rhs(end, dir, sign, hol + dt * k3);
      hol += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      if (!hol.allFinite()) throw PreconditionError("holonomy transport diverged");
      q = end;
    }
    // Snap to the exact corner to avoid drift.
    q[u(dir)] = point[u(dir)] + (sign > 0 ? h : 0.0);
  }
  const TensorField rc = curvature_tm(nabla);
  Eigen::MatrixXd rm(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) rm(b, a) = eval(rc.at({i, j, a, b}), point);
  }
  const Eigen::MatrixXd lg = hol.log();
  const Eigen::MatrixXd defect = lg + h * h * rm;
  HolonomyResult out;
  out.holonomy = from_eigen(hol);
  out.log_holonomy = from_eigen(lg);
  out.curvature = from_eigen(rm);
  out.defect = from_eigen(defect);
  out.defect_norm = defect.norm();
  const double scale = h * h * rm.norm();
  out.relative_error = scale > 0.0 ? out.defect_norm / scale : out.defect_norm;
  return out;
}

}  // namespace cartalg
