#include "stylebasis/kmeans.hpp"

#include <limits>

#include "stylebasis/error.hpp"
#include "stylebasis/rng.hpp"

namespace stylebasis {

namespace {

struct Run {
  std::vector<std::size_t> assignment;
  Eigen::MatrixXd centroids;
  double wcss = 0.0;
};

Eigen::MatrixXd plus_plus(const Eigen::MatrixXd& x, std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  Eigen::MatrixXd c(static_cast<Eigen::Index>(k), x.cols());
  c.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      d2[i] = std::min(d2[i], (x.row(ii) - c.row(static_cast<Eigen::Index>(j - 1))).squaredNorm());
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);
    }
    c.row(static_cast<Eigen::Index>(j)) = x.row(static_cast<Eigen::Index>(pick));
  }
  return c;
}

Run lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd c, std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto k = static_cast<std::size_t>(c.rows());
  Run run;
  run.assignment.assign(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = (x.row(static_cast<Eigen::Index>(i)) - c.row(static_cast<Eigen::Index>(j))).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (run.assignment[i] != best) {
        run.assignment[i] = best;
        changed = true;
      }
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(c.rows(), c.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(run.assignment[i])) += x.row(static_cast<Eigen::Index>(i));
      ++counts[run.assignment[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (counts[j] > 0) {
        c.row(jj) = sums.row(jj) / static_cast<double>(counts[j]);
        continue;
      }
      // Empty cluster: move it to the point farthest from its own centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double d = (x.row(ii) - c.row(static_cast<Eigen::Index>(run.assignment[i]))).squaredNorm();
        if (d > far_d && counts[run.assignment[i]] > 1) {
          far_d = d;
          far = i;
        }
      }
      --counts[run.assignment[far]];
      run.assignment[far] = j;
      counts[j] = 1;
      c.row(jj) = x.row(static_cast<Eigen::Index>(far));
      changed = true;
    }
    if (!changed) break;
  }
  run.wcss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run.wcss += (x.row(static_cast<Eigen::Index>(i)) - c.row(static_cast<Eigen::Index>(run.assignment[i]))).squaredNorm();
  }
  run.centroids = std::move(c);
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed, std::size_t restarts,
                    std::size_t max_iterations) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "k must be positive");
  if (static_cast<std::size_t>(points.rows()) < k) {
    fail(ErrorKind::InvalidArgument, "fewer points than clusters");
  }
  if (restarts == 0) restarts = 1;
  Rng rng(Rng::derive(seed, "kmeans"));
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Run run = lloyd(points, plus_plus(points, k, rng), max_iterations);
    best.restart_wcss.push_back(run.wcss);
    if (run.wcss < best.wcss) {
      best.wcss = run.wcss;
      best.assignment = std::move(run.assignment);
      best.centroids = std::move(run.centroids);
    }
  }
  return best;
}

}  // namespace stylebasis
