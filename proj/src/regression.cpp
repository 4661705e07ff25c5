#include <cmath>

#include <Eigen/Dense>

#include "detail.hpp"
#include "mrbench/error.hpp"

namespace mrbench::suts {

namespace {

void validate(const DataMatrix& data) {
    if (data.rows.empty()) throw PreconditionError("regression needs at least one data row");
    const auto p = data.predictor_count();
    for (const auto& row : data.rows) {
        if (row.predictors.size() != p) throw PreconditionError("rows do not share a predictor dimension");
        if (!std::isfinite(row.response)) throw PreconditionError("non-finite response");
        for (double v : row.predictors)
            if (!std::isfinite(v)) throw PreconditionError("non-finite predictor");
    }
}

Eigen::MatrixXd design(const DataMatrix& data, bool intercept) {
    const auto n = static_cast<Eigen::Index>(data.rows.size());
    const auto p = static_cast<Eigen::Index>(data.predictor_count());
    const Eigen::Index off = intercept ? 1 : 0;
    Eigen::MatrixXd a(n, p + off);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (intercept) a(i, 0) = 1.0;
        for (Eigen::Index j = 0; j < p; ++j) a(i, j + off) = data.rows[i].predictors[j];
    }
    return a;
}

Eigen::VectorXd response(const DataMatrix& data) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.rows.size()));
    for (std::size_t i = 0; i < data.rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = data.rows[i].response;
    return y;
}

// Minimum-norm least squares; identically zero columns are excluded from the
// solve and pinned to exactly 0.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    std::vector<Eigen::Index> live;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (a.col(j).cwiseAbs().maxCoeff() > 0.0) live.push_back(j);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(a.cols());
    if (live.empty()) return beta;
    Eigen::MatrixXd reduced(a.rows(), static_cast<Eigen::Index>(live.size()));
    for (std::size_t k = 0; k < live.size(); ++k) reduced.col(static_cast<Eigen::Index>(k)) = a.col(live[k]);
    const Eigen::VectorXd sol = reduced.completeOrthogonalDecomposition().solve(y);
    for (std::size_t k = 0; k < live.size(); ++k) beta(live[k]) = sol(static_cast<Eigen::Index>(k));
    return beta;
}

Coefficients pack(const Eigen::MatrixXd& a, const Eigen::VectorXd& beta, bool intercept) {
    Coefficients c;
    const Eigen::Index off = intercept ? 1 : 0;
    c.intercept = intercept ? beta(0) : 0.0;
    for (Eigen::Index j = off; j < beta.size(); ++j) c.weights.push_back(beta(j));
    const Eigen::VectorXd pred = a * beta;
    c.predictions.assign(pred.data(), pred.data() + pred.size());
    return c;
}

}  // namespace

Coefficients ols_fit(const DataMatrix& data) {
    validate(data);
    const auto a = design(data, true);
    return pack(a, min_norm_solve(a, response(data)), true);
}

namespace detail {

Coefficients fit_without_intercept(const DataMatrix& data) {
    validate(data);
    const auto a = design(data, false);
    Coefficients c = pack(a, min_norm_solve(a, response(data)), false);
    return c;
}

Coefficients fit_ridge(const DataMatrix& data, double lambda) {
    validate(data);
    const auto a = design(data, true);
    Eigen::MatrixXd gram = a.transpose() * a;
    for (Eigen::Index j = 1; j < gram.cols(); ++j) gram(j, j) += lambda;
    const Eigen::VectorXd beta = gram.ldlt().solve(a.transpose() * response(data));
    return pack(a, beta, true);
}

}  // namespace detail

}  // namespace mrbench::suts
