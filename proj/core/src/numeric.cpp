#include "rfmseg/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rfmseg/error.hpp"

namespace rfmseg {

namespace {

void require_finite(const Matrix& m) {
    for (double v : m.data())
        if (!std::isfinite(v)) throw std::invalid_argument("input matrix contains a non-finite value");
}

FeatureMatrix apply_scaling(const FeatureMatrix& x, Scaling scaling) {
    FeatureMatrix out = x;
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double s = scaling.scale[c];
            out.data(r, c) = s == 0.0 ? 0.0 : (x.data(r, c) - scaling.offset[c]) / s;
        }
    out.scaling = std::move(scaling);
    return out;
}

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) mean[c] += x(r, c);
    for (double& m : mean) m /= static_cast<double>(x.rows());
    return mean;
}

}  // namespace

FeatureMatrix minmax_scale(const FeatureMatrix& x) {
    x.validate();
    Scaling s{ScalingKind::MinMax, {}, {}};
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double lo = x.data(0, c), hi = lo;
        for (std::size_t r = 1; r < x.rows(); ++r) {
            lo = std::min(lo, x.data(r, c));
            hi = std::max(hi, x.data(r, c));
        }
        s.offset.push_back(lo);
        s.scale.push_back(hi - lo);
    }
    return apply_scaling(x, std::move(s));
}

FeatureMatrix standard_scale(const FeatureMatrix& x) {
    x.validate();
    Scaling s{ScalingKind::ZScore, column_means(x.data), {}};
    const std::size_t n = x.rows();
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double ss = 0.0;
        bool constant = true;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = x.data(r, c) - s.offset[c];
            ss += d * d;
            constant = constant && x.data(r, c) == x.data(0, c);
        }
        s.scale.push_back(constant || n < 2 ? 0.0 : std::sqrt(ss / static_cast<double>(n - 1)));
    }
    return apply_scaling(x, std::move(s));
}

FeatureMatrix inverse_transform(const FeatureMatrix& x) {
    if (x.scaling.kind == ScalingKind::Raw) return x;
    FeatureMatrix out = x;
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            out.data(r, c) = x.data(r, c) * x.scaling.scale[c] + x.scaling.offset[c];
    out.scaling = Scaling{};
    return out;
}

Matrix covariance_matrix(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    if (n < 2) throw std::invalid_argument("covariance needs at least two rows");
    require_finite(x);
    const auto mean = column_means(x);
    Matrix cov(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            const double di = x(r, i) - mean[i];
            for (std::size_t j = i; j < d; ++j) cov(i, j) += di * (x(r, j) - mean[j]);
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= static_cast<double>(n - 1);
            cov(j, i) = cov(i, j);
        }
    return cov;
}

SymmetricEigen eigen_symmetric(const Matrix& c, const JacobiOptions& opts) {
    const std::size_t d = c.rows();
    if (d == 0 || c.cols() != d) throw std::invalid_argument("eigen_symmetric needs a non-empty square matrix");
    require_finite(c);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(c(i, j) - c(j, i)) > opts.symmetry_tolerance) {
                throw std::invalid_argument("matrix is not symmetric within tolerance");
            }

    Matrix a = c;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) a(i, j) = a(j, i) = 0.5 * (c(i, j) + c(j, i));
    Matrix v = Matrix::identity(d);  // columns accumulate eigenvectors

    const double target = opts.relative_tolerance * c.norm();
    const auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > target) {
        if (sweep == opts.max_sweeps) {
            throw AlgorithmError("Jacobi eigensolver did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // rotation angle that annihilates a(p, q)
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;

                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cs * akp - sn * akq;
                    a(k, q) = sn * akp + cs * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cs * apk - sn * aqk;
                    a(q, k) = sn * apk + cs * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.sweeps = sweep;
    out.vectors = Matrix(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        const std::size_t src = order[r];
        out.values.push_back(a(src, src));
        std::size_t arg = 0;
        for (std::size_t k = 1; k < d; ++k)
            if (std::abs(v(k, src)) > std::abs(v(arg, src))) arg = k;
        const double sign = v(arg, src) < 0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < d; ++k) out.vectors(r, k) = sign * v(k, src);
    }
    return out;
}

Matrix PcaModel::transform(const Matrix& x) const {
    const std::size_t k = components.rows(), d = components.cols();
    if (x.cols() != d) throw std::invalid_argument("PCA transform: column count mismatch");
    Matrix scores(x.rows(), k);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += (x(r, j) - column_means[j]) * components(i, j);
            scores(r, i) = s;
        }
    return scores;
}

Matrix PcaModel::inverse_transform(const Matrix& scores) const {
    const std::size_t k = components.rows(), d = components.cols();
    if (scores.cols() != k) throw std::invalid_argument("PCA inverse transform: column count mismatch");
    Matrix x(scores.rows(), d);
    for (std::size_t r = 0; r < scores.rows(); ++r)
        for (std::size_t j = 0; j < d; ++j) {
            double s = column_means[j];
            for (std::size_t i = 0; i < k; ++i) s += scores(r, i) * components(i, j);
            x(r, j) = s;
        }
    return x;
}

PcaResult pca_fit_transform(const FeatureMatrix& x, std::size_t k) {
    x.validate();
    const std::size_t n = x.rows(), d = x.cols();
    if (n < 2) throw std::invalid_argument("PCA needs at least two rows");
    if (k < 1 || k > std::min(n, d)) {
        throw std::invalid_argument("PCA component count " + std::to_string(k) + " outside [1, min(n, d) = " +
                                    std::to_string(std::min(n, d)) + "]");
    }
    const auto eig = eigen_symmetric(covariance_matrix(x.data));

    PcaResult result;
    auto& m = result.model;
    m.column_means = column_means(x.data);
    m.components = Matrix(k, d);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < d; ++j) m.components(i, j) = eig.vectors(i, j);
    m.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
    m.total_variance = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
    for (double lambda : m.eigenvalues) {
        m.explained_variance_ratio.push_back(m.total_variance > 0 ? lambda / m.total_variance : 0.0);
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("P" + std::to_string(i + 1));
    result.scores = make_feature_matrix(m.transform(x.data), std::move(names));
    result.scores.row_ids = x.row_ids;
    return result;
}

}  // namespace rfmseg
