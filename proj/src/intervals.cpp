#include <algorithm>
#include <cmath>
#include <string>

#include "tileregu/error.hpp"
#include "tileregu/oracle.hpp"

namespace tileregu {

double IntervalSet::measure() const {
    double s = 0;
    for (auto& [lo, hi] : intervals) s += hi - lo;
    return s;
}

IntervalSet make_interval_set(std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (iv[i].second < iv[i].first) fail(ErrorKind::InvalidInput, "interval with hi < lo");
        if (i && iv[i].first < iv[i - 1].second) fail(ErrorKind::InvalidInput, "overlapping intervals");
    }
    return IntervalSet{std::move(iv)};
}

IntervalSet th10_set(int terms) {
    if (terms < 1) fail(ErrorKind::InvalidInput, "th10 set needs at least one term");
    std::vector<std::pair<double, double>> iv;
    double x = 0;
    for (int k = 1; k <= terms; ++k) {
        x += 1.0 / (static_cast<double>(k) * k);
        iv.emplace_back(x, x + std::ldexp(1.0, -k - 2));
    }
    return make_interval_set(std::move(iv));
}

IntervalSet quasi_cantor_set(int levels) {
    if (levels < 1 || levels > 20) fail(ErrorKind::InvalidInput, "quasi-Cantor levels must be in 1..20");
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}}, next;
    for (int k = 1; k <= levels; ++k) {
        const double gap = std::ldexp(1.0, -(1 << k));
        next.clear();
        for (auto& [a, b] : iv) {
            const double c = (a + b) / 2;
            next.emplace_back(a, std::max(a, c - gap / 2));
            next.emplace_back(std::min(b, c + gap / 2), b);
        }
        iv.swap(next);
    }
    return make_interval_set(std::move(iv));
}

double interval_eps_growth(const IntervalSet& s, double eps) {
    if (s.intervals.empty()) return 0;
    double g = 2 * eps;
    for (std::size_t i = 1; i < s.intervals.size(); ++i)
        g += std::min(s.intervals[i].first - s.intervals[i - 1].second, 2 * eps);
    return g;
}

double interval_eps_measure(const IntervalSet& s, double eps) { return s.measure() + interval_eps_growth(s, eps); }

double interval_l1_shift(const IntervalSet& s, double t) {
    // |G xor (G+t)| = 2 (|G u (G+t)| - |G|)
    const auto& a = s.intervals;
    std::size_t i = 0, j = 0;
    double uni = 0, cur_lo = 0, cur_hi = 0;
    bool open = false;
    while (i < a.size() || j < a.size()) {
        std::pair<double, double> next;
        if (j >= a.size() || (i < a.size() && a[i].first <= a[j].first + t)) {
            next = a[i++];
        } else {
            next = {a[j].first + t, a[j].second + t};
            ++j;
        }
        if (open && next.first <= cur_hi) {
            cur_hi = std::max(cur_hi, next.second);
        } else {
            if (open) uni += cur_hi - cur_lo;
            cur_lo = next.first;
            cur_hi = next.second;
            open = true;
        }
    }
    if (open) uni += cur_hi - cur_lo;
    return 2 * (uni - s.measure());
}

bool doubling_check(const IntervalSet& s, double r) {
    const double g1 = interval_eps_growth(s, r), g2 = interval_eps_growth(s, 2 * r);
    return g2 <= 2 * g1 * (1 + 1e-12);
}

} // namespace tileregu
