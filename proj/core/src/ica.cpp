#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylebasis/error.hpp"
#include "stylebasis/latent.hpp"
#include "stylebasis/rng.hpp"

namespace stylebasis {

namespace {

using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// (W W^T)^{-1/2} W
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& W) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W * W.transpose());
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * W;
}

}  // namespace

std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

std::vector<double> column_sums(const Eigen::MatrixXf& A, bool absolute) {
  std::vector<double> sums(static_cast<std::size_t>(A.cols()), 0.0);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) s += absolute ? std::abs(A(i, j)) : A(i, j);
    sums[static_cast<std::size_t>(j)] = s;
  }
  return sums;
}

BasisSplit split_basis(const std::vector<std::size_t>& arg, std::size_t n_extreme) {
  const std::size_t c = arg.size();
  if (2 * n_extreme > c) fail(ErrorKind::InvalidArgument, "n_extreme must be <= c/2");
  BasisSplit split;
  for (std::size_t rank = 0; rank < c; ++rank) {
    const bool extreme = rank < n_extreme || rank >= c - n_extreme;
    (extreme ? split.stroke_ids : split.color_ids).push_back(arg[rank]);
  }
  return split;
}

BasisSplit split_basis(const IcaRep& rep) { return split_basis(rep.arg, rep.n_extreme); }

IcaRep ica_decompose(const FeatureMap& f, const IcaOptions& options) {
  const auto c = static_cast<Eigen::Index>(f.c());
  const auto hw = static_cast<Eigen::Index>(f.hw());
  if (c < 2) fail(ErrorKind::InvalidArgument, "ICA needs at least two channels");
  if (hw <= c) fail(ErrorKind::InvalidArgument, "ICA needs more spatial samples than channels");
  if (2 * options.n_extreme > f.c()) fail(ErrorKind::InvalidArgument, "n_extreme must be <= c/2");

  // Observed mixtures: one row per channel.
  const Eigen::Map<const RowMajorF> fm(f.data().data(), hw, c);
  Eigen::MatrixXd X = fm.cast<double>().transpose();
  const Eigen::VectorXd mean = X.rowwise().mean();
  X.colwise() -= mean;

  // Constant channels (dead ReLU units) carry no signal. Each keeps a slot of
  // its own with a zero signal and a unit mixing weight; FastICA runs on the rest.
  const Eigen::VectorXd var = X.rowwise().squaredNorm() / static_cast<double>(hw);
  const double max_var = var.maxCoeff();
  std::vector<Eigen::Index> active;
  for (Eigen::Index ch = 0; ch < c; ++ch) {
    if (max_var > 1e-20 && var(ch) > 1e-12 * max_var) active.push_back(ch);
  }
  if (active.empty()) fail(ErrorKind::DegenerateInput, "degenerate input: every channel is constant");
  const auto r = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd Xa(r, hw);
  for (Eigen::Index p = 0; p < r; ++p) Xa.row(p) = X.row(active[static_cast<std::size_t>(p)]);

  // Whitening Z = K X with K = D^{-1/2} E^T over the numerically nonzero
  // eigen-directions. Directions below the cutoff are not unmixed; each becomes
  // a residual slot whose signal is the plain projection onto it.
  const Eigen::MatrixXd cov = (Xa * Xa.transpose()) / static_cast<double>(hw);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) fail(ErrorKind::ConvergenceFailure, "whitening eigensolver failed");
  const double largest = eig.eigenvalues().maxCoeff();
  Eigen::Index skip = 0;  // eigenvalues ascend
  while (skip < r && eig.eigenvalues()(skip) <= 1e-9 * largest) ++skip;
  const Eigen::Index k = r - skip;
  const Eigen::VectorXd evals = eig.eigenvalues().tail(k);
  const Eigen::MatrixXd E = eig.eigenvectors().rightCols(k);
  const Eigen::MatrixXd E_null = eig.eigenvectors().leftCols(skip);
  const Eigen::MatrixXd K = evals.cwiseSqrt().cwiseInverse().asDiagonal() * E.transpose();
  const Eigen::MatrixXd Z = K * Xa;

  Rng rng(Rng::derive(options.seed, "fastica.init"));
  Eigen::MatrixXd W(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) W(i, j) = rng.normal();
  }
  W = symmetric_decorrelation(W);

  const double inv_n = 1.0 / static_cast<double>(hw);
  std::size_t iteration = 0;
  bool converged = false;
  while (iteration < options.max_iterations) {
    ++iteration;
    const Eigen::MatrixXd G = (W * Z).array().tanh().matrix();
    const Eigen::VectorXd g_prime_mean = (1.0 - G.array().square()).rowwise().mean().matrix();
    Eigen::MatrixXd W_next = (G * Z.transpose()) * inv_n - g_prime_mean.asDiagonal() * W;
    W_next = symmetric_decorrelation(W_next);
    const double change =
        ((W_next * W.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
    W = W_next;
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    fail(ErrorKind::ConvergenceFailure,
         "fastICA did not converge within " + std::to_string(options.max_iterations) + " iterations");
  }

  // W is orthogonal, so (W K)^{-1} = E D^{1/2} W^T.
  Eigen::MatrixXd Sa(r, hw), Aa(r, r);
  Sa << W * Z, E_null.transpose() * Xa;
  Aa << E * evals.cwiseSqrt().asDiagonal() * W.transpose(), E_null;

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(c, hw);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(c, c);
  for (Eigen::Index q = 0; q < r; ++q) {
    const Eigen::Index slot = active[static_cast<std::size_t>(q)];
    S.row(slot) = Sa.row(q);
    A(slot, slot) = 0.0;
    for (Eigen::Index p = 0; p < r; ++p) A(active[static_cast<std::size_t>(p)], slot) = Aa(p, q);
  }

  IcaRep rep;
  rep.S = S.cast<float>();
  rep.A = A.cast<float>();
  rep.mean = mean.cast<float>();
  rep.A_sum = column_sums(rep.A, options.absolute_sum);
  rep.arg = ascending_order(rep.A_sum);
  rep.n_extreme = options.n_extreme;
  rep.h = f.h();
  rep.w = f.w();
  rep.c = f.c();
  rep.seed = options.seed;
  rep.iterations = iteration;
  rep.absolute_sum = options.absolute_sum;
  rep.source_layer = f.layer_name();
  return rep;
}

FeatureMap ica_project_back(const IcaRep& rep, const Eigen::MatrixXf& S_mod,
                            const Eigen::MatrixXf& A_mod) {
  const auto c = static_cast<Eigen::Index>(rep.c);
  const auto hw = static_cast<Eigen::Index>(rep.h * rep.w);
  if (S_mod.rows() != c || S_mod.cols() != hw) fail(ErrorKind::ShapeMismatch, "S must be c x hw");
  if (A_mod.rows() != c || A_mod.cols() != c) fail(ErrorKind::ShapeMismatch, "A must be c x c");
  Eigen::MatrixXd X = A_mod.cast<double>() * S_mod.cast<double>();
  X.colwise() += rep.mean.cast<double>();
  // Column-major c x hw is row-major hw x c: the FeatureMap layout.
  const Eigen::MatrixXf Xf = X.cast<float>();
  return FeatureMap(rep.h, rep.w, rep.c, std::vector<float>(Xf.data(), Xf.data() + Xf.size()),
                    rep.source_layer);
}

}  // namespace stylebasis
