#include "opsplit/montecarlo/gauss_hermite.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "opsplit/common/errors.hpp"

namespace opsplit::montecarlo {

namespace {

GaussHermiteRule build(int n)
{
    // Jacobi matrix of the probabilists' Hermite recurrence He_{k+1} = x He_k - k He_{k-1}.
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k)
        j(k, k - 1) = j(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    GaussHermiteRule rule;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(es.eigenvalues()[i]);
        const double v = es.eigenvectors()(0, i);
        rule.weights.push_back(v * v);
        total += v * v;
    }
    for (double& w : rule.weights)
        w /= total;
    // Enforce the exact symmetry of the rule so odd moments vanish.
    for (int i = 0; i < n / 2; ++i) {
        const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(n - 1 - i);
        const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
        const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
        rule.nodes[a] = -x;
        rule.nodes[b] = x;
        rule.weights[a] = rule.weights[b] = w;
    }
    if (n % 2)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

} // namespace

const GaussHermiteRule& gauss_hermite(int n)
{
    if (n < 1 || n > 512)
        throw DomainError("gauss_hermite: node count must lie in 1..512");
    static std::mutex mutex;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build(n)).first;
    return it->second;
}

} // namespace opsplit::montecarlo
