#include "grd/compositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace grd {

double composition_count(int d, int M) {
    if (d < 1 || M < 0) {
        throw Error(errc::invalid_argument, "composition_count needs d >= 1, M >= 0");
    }
    double count = 1.0;
    for (int i = 1; i <= d - 1; ++i) {
        count = count * (static_cast<double>(M) + i) / i;
    }
    return std::round(count);
}

double log_multinomial(int M, std::span<const int> m) {
    if (M < 0) {
        throw Error(errc::bad_moment_order, "multinomial total must be nonnegative");
    }
    long long sum = 0;
    for (int v : m) {
        if (v < 0) {
            throw Error(errc::bad_moment_order, "multinomial parts must be nonnegative");
        }
        sum += v;
    }
    if (sum != M) {
        std::ostringstream os;
        os << "multinomial parts sum to " << sum << ", expected " << M;
        throw Error(errc::mismatched_total, os.str());
    }
    double value = std::lgamma(static_cast<double>(M) + 1.0);
    for (int v : m) {
        value -= std::lgamma(static_cast<double>(v) + 1.0);
    }
    return value;
}

CompositionEnumerator::CompositionEnumerator(int d, int M) : d_(d), total_(M) {
    if (d < 1 || M < 0) {
        throw Error(errc::invalid_argument, "composition enumeration needs d >= 1, M >= 0");
    }
    m_.assign(static_cast<size_t>(d), 0);
}

bool CompositionEnumerator::next(std::span<int> m, std::span<int> tail) {
    if (done_) return false;
    if (m.size() != static_cast<size_t>(d_) || tail.size() != static_cast<size_t>(d_)) {
        throw Error(errc::invalid_argument, "composition output spans must have size d");
    }
    if (first_) {
        m_[0] = total_;
        first_ = false;
    } else {
        // Decreasing-lexicographic successor: move one unit left-to-right.
        int i = d_ - 2;
        while (i >= 0 && m_[static_cast<size_t>(i)] == 0) --i;
        if (i < 0) {
            done_ = true;
            return false;
        }
        int moved = 1;
        for (int j = i + 1; j < d_; ++j) {
            moved += m_[static_cast<size_t>(j)];
            m_[static_cast<size_t>(j)] = 0;
        }
        m_[static_cast<size_t>(i)] -= 1;
        m_[static_cast<size_t>(i + 1)] = moved;
    }
    std::copy(m_.begin(), m_.end(), m.begin());
    int acc = 0;
    for (int k = d_ - 1; k >= 0; --k) {
        acc += m_[static_cast<size_t>(k)];
        tail[static_cast<size_t>(k)] = acc;
    }
    if (d_ == 1 || total_ == 0) {
        done_ = true;  // single composition
    }
    return true;
}

std::vector<Composition> enumerate_compositions(int d, int M, std::size_t cap) {
    double count = composition_count(d, M);
    if (count > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "composition count C(" << M + d - 1 << "," << d - 1 << ") = " << count
           << " exceeds cap " << cap;
        throw Error(errc::cap_exceeded, os.str());
    }
    std::vector<Composition> out;
    out.reserve(static_cast<size_t>(count));
    for_each_composition(d, M, [&](std::span<const int> m, std::span<const int>) {
        out.emplace_back(m.begin(), m.end());
    });
    return out;
}

MixtureTable MixtureTable::from_log_weights(int d, std::vector<Composition> ms,
                                            std::vector<double> log_weight_abs,
                                            std::vector<int> sign) {
    if (ms.size() != log_weight_abs.size() || ms.size() != sign.size() || ms.empty()) {
        throw Error(errc::invalid_argument, "mixture table arrays must be parallel and nonempty");
    }
    double max_log = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ms.size(); ++i) {
        if (sign[i] != 0 && log_weight_abs[i] > max_log) max_log = log_weight_abs[i];
    }
    if (!std::isfinite(max_log)) {
        throw Error(errc::invalid_argument, "mixture table has no nonzero weight");
    }
    std::vector<double> scaled(ms.size(), 0.0);
    double total = 0.0;
    for (size_t i = 0; i < ms.size(); ++i) {
        if (sign[i] == 0) continue;
        scaled[i] = sign[i] * std::exp(log_weight_abs[i] - max_log);
        total += scaled[i];
    }
    if (!(total > 0.0)) {
        throw Error(errc::invalid_argument, "mixture table total signed weight is not positive");
    }

    MixtureTable table;
    table.d_ = d;
    table.entries_.resize(ms.size());
    double clipped = 0.0;
    std::size_t clipped_count = 0;
    double kept = 0.0;
    for (size_t i = 0; i < ms.size(); ++i) {
        double normalized = scaled[i] / total;
        if (normalized < 0.0) {
            clipped += -normalized;
            ++clipped_count;
            normalized = 0.0;
        }
        kept += normalized;
        TableEntry& e = table.entries_[i];
        e.m = std::move(ms[i]);
        e.log_weight_abs = log_weight_abs[i];
        e.sign = sign[i];
        e.weight = normalized;
    }
    double cum = 0.0;
    for (auto& e : table.entries_) {
        e.weight /= kept;
        cum += e.weight;
        e.cumulative = cum;
    }
    table.entries_.back().cumulative = 1.0;
    table.clipped_mass_ = clipped;
    table.clipped_count_ = clipped_count;
    return table;
}

std::size_t MixtureTable::sample_index(double u) const {
    if (!(u >= 0.0) || u >= 1.0) {
        throw Error(errc::invalid_argument, "inverse-CDF lookup needs u in [0,1)");
    }
    size_t lo = 0;
    size_t hi = entries_.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (entries_[mid].cumulative > u) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

} // namespace grd
