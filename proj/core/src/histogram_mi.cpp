#include "progtr/histogram_mi.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "progtr/errors.hpp"

namespace progtr {

namespace {

constexpr double kLn2 = 0.6931471805599453;

/// Distinct-value symbolization of a discrete column.
std::vector<int> symbolize(const std::vector<double>& values, int& alphabet) {
    std::vector<double> uniq(values);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    alphabet = static_cast<int>(uniq.size());
    std::vector<int> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), values[i]) - uniq.begin());
    }
    return out;
}

std::vector<int> discretize(const std::vector<double>& col, bool discrete, int bins, int& alphabet) {
    if (discrete) return symbolize(col, alphabet);
    alphabet = bins;
    return quantile_bins(col, bins);
}

struct JointCounts {
    std::unordered_map<long long, long> joint;
    std::unordered_map<long, long> mx, my;
    long n = 0;
};

double mi_from_codes(const std::vector<long>& cx, const std::vector<long>& cy, bool miller_madow) {
    JointCounts c;
    c.n = static_cast<long>(cx.size());
    for (std::size_t i = 0; i < cx.size(); ++i) {
        ++c.joint[(static_cast<long long>(cx[i]) << 32) | static_cast<long long>(cy[i])];
        ++c.mx[cx[i]];
        ++c.my[cy[i]];
    }
    double n = static_cast<double>(c.n);
    double mi = 0.0;
    for (const auto& [key, cnt] : c.joint) {
        long x = static_cast<long>(key >> 32);
        long y = static_cast<long>(key & 0xffffffffll);
        double pxy = cnt / n;
        double px = c.mx.at(x) / n;
        double py = c.my.at(y) / n;
        mi += pxy * std::log2(pxy / (px * py));
    }
    if (miller_madow) {
        double kx = static_cast<double>(c.mx.size());
        double ky = static_cast<double>(c.my.size());
        double kxy = static_cast<double>(c.joint.size());
        mi += ((kx - 1.0) + (ky - 1.0) - (kxy - 1.0)) / (2.0 * n * kLn2);
    }
    return std::max(mi, 0.0);
}

} // namespace

std::vector<int> quantile_bins(const std::vector<double>& values, int bins) {
    if (bins < 1) throw DimensionError("quantile_bins: need at least one bin");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(bins - 1));
    for (int i = 1; i < bins; ++i) {
        edges.push_back(sorted[(static_cast<std::size_t>(i) * n) / static_cast<std::size_t>(bins)]);
    }
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    }
    return out;
}

double mi_discrete(const std::vector<int>& x, const std::vector<int>& y, bool miller_madow) {
    if (x.size() != y.size() || x.empty()) throw DimensionError("mi: column length mismatch");
    std::vector<long> cx(x.begin(), x.end()), cy(y.begin(), y.end());
    return mi_from_codes(cx, cy, miller_madow);
}

double mi_pair(const std::vector<double>& x, bool x_discrete, const std::vector<double>& y,
               bool y_discrete, const MiConfig& cfg) {
    int ax = 0, ay = 0;
    std::vector<int> dx = discretize(x, x_discrete, cfg.bins, ax);
    std::vector<int> dy = discretize(y, y_discrete, cfg.bins, ay);
    return mi_discrete(dx, dy, cfg.miller_madow);
}

MiResult mutual_information(const std::vector<std::vector<double>>& x_cols, bool x_discrete,
                            const std::vector<std::vector<double>>& y_cols, bool y_discrete,
                            const MiConfig& cfg) {
    if (x_cols.empty() || y_cols.empty()) throw DimensionError("mi: empty column set");
    std::size_t n = x_cols[0].size();
    for (const auto& c : x_cols)
        if (c.size() != n) throw DimensionError("mi: ragged x columns");
    for (const auto& c : y_cols)
        if (c.size() != n) throw DimensionError("mi: ragged y columns");

    MiResult res;
    res.low_samples = static_cast<long>(n) < cfg.min_samples;

    std::vector<std::vector<int>> dx(x_cols.size()), dy(y_cols.size());
    std::vector<int> ax(x_cols.size()), ay(y_cols.size());
    double cells = 1.0;
    for (std::size_t i = 0; i < x_cols.size(); ++i) {
        dx[i] = discretize(x_cols[i], x_discrete, cfg.bins, ax[i]);
        cells *= ax[i];
    }
    for (std::size_t j = 0; j < y_cols.size(); ++j) {
        dy[j] = discretize(y_cols[j], y_discrete, cfg.bins, ay[j]);
        cells *= ay[j];
    }

    if (cells <= static_cast<double>(cfg.max_joint_cells)) {
        std::vector<long> cx(n, 0), cy(n, 0);
        for (std::size_t i = 0; i < dx.size(); ++i) {
            for (std::size_t s = 0; s < n; ++s) cx[s] = cx[s] * ax[i] + dx[i][s];
        }
        for (std::size_t j = 0; j < dy.size(); ++j) {
            for (std::size_t s = 0; s < n; ++s) cy[s] = cy[s] * ay[j] + dy[j][s];
        }
        res.bits = mi_from_codes(cx, cy, cfg.miller_madow);
        return res;
    }

    // product alphabet too large for a joint histogram: pairwise-truncated
    // chain rule, each input coordinate paired with its most informative
    // output coordinate
    res.approximate = true;
    double total = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < dy.size(); ++j) {
            best = std::max(best, mi_discrete(dx[i], dy[j], cfg.miller_madow));
        }
        total += best;
    }
    res.bits = total;
    return res;
}

std::vector<double> bmi_matrix(const std::vector<std::vector<double>>& bit_cols,
                               const std::vector<std::vector<double>>& est_cols,
                               const MiConfig& cfg) {
    std::size_t b = bit_cols.size();
    if (est_cols.size() != b) throw DimensionError("bmi: need matching bit/estimate counts");
    std::vector<double> out(b * b, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            out[i * b + j] = mi_pair(bit_cols[i], true, est_cols[j], false, cfg);
        }
    }
    return out;
}

} // namespace progtr
