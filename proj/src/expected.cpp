#include "hsel/expected.hpp"

#include <algorithm>
#include <numeric>

#include "hsel/error.hpp"

namespace hsel {

std::vector<double> closed_form_weights(const std::vector<double>& w) {
    const std::size_t n = w.size();
    require(n > 0, "closed_form_weights: empty input");
    double c = 0.0, d = 0.0;
    for (double x : w) {
        require(x > 0.0, "closed_form_weights: every W_i must be positive");
        c += 1.0 / x;
        d += x;
    }
    const double nd = static_cast<double>(n);
    const double denom = d * c - nd * (nd - 2.0);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (d / w[i] - (nd - 2.0)) / denom;
    return p;
}

std::size_t good_index(const std::vector<double>& w_sorted) {
    const std::size_t n = w_sorted.size();
    double prefix = 0.0;
    std::size_t k = 0;
    for (std::size_t m = 1; m <= n; ++m) {
        prefix += w_sorted[m - 1];
        // The largest of the m values is the binding one.
        double wj = w_sorted[m - 1];
        if (m > 3 && (static_cast<double>(m) - 3.0) * wj > prefix - wj) break;
        k = m;
    }
    return k;
}

std::vector<double> round_weights(const std::vector<double>& w) {
    const std::size_t n = w.size();
    require(n > 0, "round_weights: empty input");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
    std::vector<double> sorted(n);
    for (std::size_t r = 0; r < n; ++r) sorted[r] = w[idx[r]];
    const std::size_t k = good_index(sorted);
    std::vector<double> head(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<double> p = closed_form_weights(head);
    std::vector<double> q(n, 0.0);
    for (std::size_t r = 0; r < k; ++r) q[idx[r]] = std::max(0.0, p[r]);
    return q;
}

double factor_bound(const std::vector<double>& q, const std::vector<double>& w, std::size_t star) {
    require(q.size() == w.size() && star < w.size(), "factor_bound: size mismatch");
    require(w[star] > 0.0, "factor_bound: W at the reference index must be positive");
    double f = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (i != star) f += q[i] * (1.0 + w[i] / w[star]);
    return f;
}

nlohmann::json mixture_to_json(const MixtureOutput& m) {
    return {{"weights", m.weights}, {"W", m.W}};
}

MixtureOutput mixture_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("weights") || !j.contains("W"))
        fail(ErrorKind::Config, "mixture needs weights and W");
    MixtureOutput m;
    m.weights = j["weights"].get<std::vector<double>>();
    m.W = j["W"].get<std::vector<double>>();
    if (m.weights.size() != m.W.size()) fail(ErrorKind::Config, "mixture arrays differ in length");
    return m;
}

MixtureOutput select_expected(const SemiDistanceTable& table, double shift) {
    require(table.size() > 0, "select_expected: empty table");
    require(shift >= 0.0, "select_expected: shift must be nonnegative");
    MixtureOutput m;
    m.W = table.column_maxima();
    for (double& x : m.W) x += shift;
    m.weights.assign(m.W.size(), 0.0);
    auto zero = std::find(m.W.begin(), m.W.end(), 0.0);
    if (zero != m.W.end()) {
        m.weights[static_cast<std::size_t>(zero - m.W.begin())] = 1.0;
        return m;
    }
    m.weights = round_weights(m.W);
    return m;
}

MixtureOutput select_expected(SemiDistanceOracle& oracle, double eps) {
    const auto before = oracle.queries();
    SemiDistanceTable t = build_table(oracle);
    MixtureOutput m = select_expected(t, oracle.mode() == TableMode::Empirical ? eps : 0.0);
    m.queries = oracle.queries() - before;
    m.samples_used = oracle.samples_used();
    return m;
}

}  // namespace hsel
