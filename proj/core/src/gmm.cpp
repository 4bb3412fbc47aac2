#include "rfmseg/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "rfmseg/error.hpp"
#include "rfmseg/kmeans.hpp"

namespace rfmseg {

namespace {

// Lower-triangular Cholesky factor, or nullopt when not positive definite.
std::optional<Matrix> cholesky(const Matrix& a) {
    const std::size_t d = a.rows();
    Matrix l(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        double s = a(j, j);
        for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
        if (!(s > 0.0) || !std::isfinite(s)) return std::nullopt;
        l(j, j) = std::sqrt(s);
        for (std::size_t i = j + 1; i < d; ++i) {
            double t = a(i, j);
            for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
            l(i, j) = t / l(j, j);
        }
    }
    return l;
}

struct Component {
    Matrix chol;
    double log_norm = 0.0;  // -d/2 log(2 pi) - 1/2 log|cov|
};

Component prepare(const Matrix& cov, std::size_t index) {
    auto l = cholesky(cov);
    if (!l) {
        throw AlgorithmError("GMM component " + std::to_string(index) +
                             " covariance collapsed (not positive definite despite regularization)");
    }
    const std::size_t d = cov.rows();
    double log_det = 0.0;
    for (std::size_t i = 0; i < d; ++i) log_det += 2.0 * std::log((*l)(i, i));
    return {std::move(*l), -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det};
}

double log_density(std::span<const double> x, std::span<const double> mean, const Component& comp) {
    const std::size_t d = x.size();
    // solve L z = (x - mean); Mahalanobis distance is |z|^2
    double maha = 0.0;
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) {
        double t = x[i] - mean[i];
        for (std::size_t k = 0; k < i; ++k) t -= comp.chol(i, k) * z[k];
        z[i] = t / comp.chol(i, i);
        maha += z[i] * z[i];
    }
    return comp.log_norm - 0.5 * maha;
}

// E-step: fills responsibilities, returns mean log-likelihood.
double expectation(const Matrix& x, const GmmModel& m, Matrix& resp) {
    const std::size_t n = x.rows(), k = m.weights.size();
    std::vector<Component> comps;
    for (std::size_t c = 0; c < k; ++c) comps.push_back(prepare(m.covariances[c], c));

    std::vector<double> logp(k);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            logp[c] = m.weights[c] > 0 ? std::log(m.weights[c]) + log_density(x.row(i), m.means.row(c), comps[c])
                                       : -std::numeric_limits<double>::infinity();
            hi = std::max(hi, logp[c]);
        }
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += std::exp(logp[c] - hi);
        const double lse = hi + std::log(s);
        for (std::size_t c = 0; c < k; ++c) resp(i, c) = std::exp(logp[c] - lse);
        total += lse;
    }
    return total / static_cast<double>(n);
}

void maximization(const Matrix& x, const Matrix& resp, double reg, GmmModel& m) {
    const std::size_t n = x.rows(), d = x.cols(), k = m.weights.size();
    for (std::size_t c = 0; c < k; ++c) {
        double nk = 0.0;
        for (std::size_t i = 0; i < n; ++i) nk += resp(i, c);
        if (!(nk > 0.0)) {
            throw AlgorithmError("GMM component " + std::to_string(c) + " collapsed: it holds no responsibility mass");
        }
        m.weights[c] = nk / static_cast<double>(n);

        std::vector<double> mu(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) mu[j] += resp(i, c) * x(i, j);
        for (double& v : mu) v /= nk;
        std::copy(mu.begin(), mu.end(), m.means.row(c).begin());

        Matrix cov(d, d);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = resp(i, c);
            for (std::size_t a = 0; a < d; ++a) {
                const double da = x(i, a) - mu[a];
                for (std::size_t b = a; b < d; ++b) cov(a, b) += r * da * (x(i, b) - mu[b]);
            }
        }
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = a; b < d; ++b) {
                cov(a, b) /= nk;
                cov(b, a) = cov(a, b);
            }
            cov(a, a) += reg;
        }
        m.covariances[c] = std::move(cov);
    }
}

}  // namespace

double gaussian_log_density(std::span<const double> x, std::span<const double> mean, const Matrix& cov) {
    return log_density(x, mean, prepare(cov, 0));
}

GmmFit gmm_fit(const Matrix& x, const GmmParams& params) {
    const std::size_t n = x.rows(), d = x.cols(), k = params.k;
    if (d == 0) throw std::invalid_argument("GMM needs d >= 1");
    if (k < 1) throw std::invalid_argument("GMM needs k >= 1");
    if (k >= n) throw std::invalid_argument("GMM needs k < n (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
    if (!(params.reg >= 0.0)) throw std::invalid_argument("GMM regularization must be non-negative");

    KMeansParams init;
    init.k = k;
    init.seed = params.seed;
    const KMeansFit km = kmeans_fit(x, init);

    GmmFit fit;
    GmmModel& m = fit.model;
    m.weights.assign(k, 0.0);
    m.means = km.model.centroids;
    m.covariances.assign(k, Matrix(d, d));
    {
        const auto sizes = km.result.cluster_sizes();
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(km.result.labels[i]);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    m.covariances[c](a, b) += (x(i, a) - m.means(c, a)) * (x(i, b) - m.means(c, b));
        }
        for (std::size_t c = 0; c < k; ++c) {
            m.weights[c] = static_cast<double>(sizes[c]) / static_cast<double>(n);
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) m.covariances[c](a, b) /= static_cast<double>(sizes[c]);
                m.covariances[c](a, a) += params.reg;
            }
        }
    }

    m.responsibilities = Matrix(n, k);
    double ll = expectation(x, m, m.responsibilities);
    fit.log_likelihood_history.push_back(ll);

    std::size_t iterations = 0;
    while (iterations < params.max_iter) {
        ++iterations;
        maximization(x, m.responsibilities, params.reg, m);
        const double next = expectation(x, m, m.responsibilities);
        fit.log_likelihood_history.push_back(next);
        const double gain = next - ll;
        ll = next;
        if (gain < params.tol) {
            m.converged = true;
            break;
        }
    }
    m.log_likelihood = ll;

    auto& r = fit.result;
    r.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = m.responsibilities.row(i);
        r.labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    r.n_clusters = compact_labels(r.labels);
    r.seed = params.seed;
    r.iterations = iterations;
    r.diagnostics["log_likelihood"] = ll;
    r.diagnostics["converged"] = m.converged ? 1.0 : 0.0;
    r.diagnostics["empty_components"] = static_cast<double>(k - r.n_clusters);
    return fit;
}

}  // namespace rfmseg
