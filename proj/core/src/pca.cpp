#include <Eigen/SVD>
#include <algorithm>

#include "stylebasis/error.hpp"
#include "stylebasis/latent.hpp"

namespace stylebasis {

namespace {

using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

PcaRep pca_decompose(const FeatureMap& f, const PcaOptions& options) {
  const auto hw = static_cast<Eigen::Index>(f.hw());
  const auto c = static_cast<Eigen::Index>(f.c());
  const Eigen::Index full = std::min(hw, c);
  const Eigen::Index k = options.rank == 0 ? full : static_cast<Eigen::Index>(options.rank);
  if (k < 1 || k > full) {
    fail(ErrorKind::InvalidArgument, "PCA rank must lie in [1, min(hw, c)]");
  }

  const Eigen::Map<const RowMajorF> fm(f.data().data(), hw, c);
  Eigen::MatrixXd X = fm.cast<double>();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(c);
  if (options.center) {
    mean = X.colwise().mean().transpose();
    X.rowwise() -= mean.transpose();
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) fail(ErrorKind::ConvergenceFailure, "SVD did not converge");

  Eigen::MatrixXd U = svd.matrixU().leftCols(k);
  Eigen::MatrixXd V = svd.matrixV().leftCols(k);
  const Eigen::VectorXd D = svd.singularValues().head(k);
  // Fix the sign ambiguity: the largest-magnitude entry of each V column is positive.
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index arg = 0;
    V.col(j).cwiseAbs().maxCoeff(&arg);
    if (V(arg, j) < 0) {
      V.col(j) *= -1.0;
      U.col(j) *= -1.0;
    }
  }

  PcaRep rep;
  rep.U = U.cast<float>();
  rep.D = D.cast<float>();
  rep.V = V.cast<float>();
  rep.H = (U.transpose() * X).cast<float>();
  rep.mean = mean.cast<float>();
  rep.h = f.h();
  rep.w = f.w();
  rep.c = f.c();
  rep.k = static_cast<std::size_t>(k);
  rep.centered = options.center;
  rep.source_layer = f.layer_name();
  return rep;
}

FeatureMap pca_project_back(const PcaRep& rep, const Eigen::MatrixXf& H_mod) {
  if (H_mod.rows() != static_cast<Eigen::Index>(rep.k) ||
      H_mod.cols() != static_cast<Eigen::Index>(rep.c)) {
    fail(ErrorKind::ShapeMismatch, "PCA coefficients must be k x c");
  }
  Eigen::MatrixXd X = rep.U.cast<double>() * H_mod.cast<double>();
  X.rowwise() += rep.mean.cast<double>().transpose();
  RowMajorF out = X.cast<float>();
  return FeatureMap(rep.h, rep.w, rep.c, std::vector<float>(out.data(), out.data() + out.size()),
                    rep.source_layer);
}

}  // namespace stylebasis
