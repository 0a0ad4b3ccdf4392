#include "grd/sampling.hpp"

#include <cmath>
#include <sstream>

#include "grd/series.hpp"
#include "grd/mixture.hpp"

namespace grd {

const char* method_name(Method m) {
    switch (m) {
        case Method::zero_sum: return "zero-sum";
        case Method::exact: return "exact";
        case Method::approximate: return "approx";
        case Method::rejection: return "rejection";
    }
    return "unknown";
}

OrderedPoint point_from_loggaps(std::span<const double> z) {
    for (double v : z) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(errc::invalid_argument, "log gaps must be finite and nonnegative");
        }
    }
    int d = static_cast<int>(z.size()) + 1;
    if (d < 2) {
        throw Error(errc::dimension_too_small, "log-gap vector needs at least one entry");
    }
    double sum = 1.0;
    double cum = 0.0;
    for (double v : z) {
        cum += v;
        sum += std::exp(-cum);
    }
    std::vector<double> y(static_cast<size_t>(d));
    y[0] = 1.0 / sum;
    for (int k = 1; k < d; ++k) {
        y[static_cast<size_t>(k)] =
            y[static_cast<size_t>(k - 1)] * std::exp(-z[static_cast<size_t>(k - 1)]);
    }
    return OrderedPoint::unchecked(std::move(y));
}

std::vector<double> loggaps_from_point(const OrderedPoint& y) {
    int d = y.dim();
    if (!(y[d - 1] > 0.0)) {
        throw Error(errc::invalid_argument,
                    "log gaps are finite only for strictly positive points");
    }
    std::vector<double> z(static_cast<size_t>(d - 1));
    for (int k = 1; k < d; ++k) {
        z[static_cast<size_t>(k - 1)] = std::log(y[k - 1] / y[k]);
    }
    return z;
}

Sampler::Sampler(Params p, Method method, int truncation, std::size_t cap)
    : params_(std::move(p)), method_(method) {
    switch (method_) {
        case Method::zero_sum:
            if (params_.kind() != ParamCase::zero_sum) {
                throw Error(errc::method_case_mismatch,
                            "zero-sum sampling requires sum(a) == 0; got sum = " +
                                std::to_string(params_.tail(1)));
            }
            zero_sum_rates_.assign(params_.tails().begin() + 1, params_.tails().end());
            break;
        case Method::exact:
            if (params_.kind() == ParamCase::general) {
                throw Error(errc::method_case_mismatch,
                            "exact mixture sampling requires sum(a) == -M for integer M >= 0; "
                            "got sum = " + std::to_string(params_.tail(1)) +
                            " (use the approximate or rejection method)");
            }
            table_ = mixture_weights(params_, cap);
            break;
        case Method::approximate:
            table_ = signed_series_weights(params_, truncation, cap);
            break;
        case Method::rejection: {
            zero_sum_rates_.assign(params_.tails().begin() + 1, params_.tails().end());
            double abar1 = params_.tail(1);
            // Envelope for Y_1^{abar1} on [1/d, 1]: d^{-abar1} when abar1 < 0, else 1.
            log_accept_bound_ = abar1 < 0.0
                                    ? -abar1 * std::log(static_cast<double>(params_.dim()))
                                    : 0.0;
            break;
        }
    }
    scratch_z_.assign(static_cast<size_t>(params_.dim() - 1), 0.0);
}

void Sampler::draw_into(RngState& rng, std::span<double> y) {
    int d = params_.dim();
    auto reconstruct = [&](std::span<const double> z) {
        double sum = 1.0;
        double cum = 0.0;
        for (double v : z) {
            cum += v;
            sum += std::exp(-cum);
        }
        y[0] = 1.0 / sum;
        for (int k = 1; k < d; ++k) {
            y[static_cast<size_t>(k)] =
                y[static_cast<size_t>(k - 1)] * std::exp(-z[static_cast<size_t>(k - 1)]);
        }
    };

    switch (method_) {
        case Method::zero_sum: {
            for (int k = 0; k < d - 1; ++k) {
                scratch_z_[static_cast<size_t>(k)] =
                    rng.exponential(zero_sum_rates_[static_cast<size_t>(k)]);
            }
            reconstruct(scratch_z_);
            break;
        }
        case Method::exact:
        case Method::approximate: {
            const TableEntry& e = table_->entry(table_->sample_index(rng.uniform01()));
            // Gap rates are the tail sums of a + m: m-bar_k = sum(m) - (m_1+...+m_{k-1}).
            int total = 0;
            for (int v : e.m) total += v;
            int prefix = 0;
            for (int k = 2; k <= d; ++k) {
                prefix += e.m[static_cast<size_t>(k - 2)];
                scratch_z_[static_cast<size_t>(k - 2)] =
                    rng.exponential(params_.tail(k) + (total - prefix));
            }
            reconstruct(scratch_z_);
            break;
        }
        case Method::rejection: {
            double abar1 = params_.tail(1);
            while (true) {
                ++proposals_;
                for (int k = 0; k < d - 1; ++k) {
                    scratch_z_[static_cast<size_t>(k)] =
                        rng.exponential(zero_sum_rates_[static_cast<size_t>(k)]);
                }
                reconstruct(scratch_z_);
                double log_accept = abar1 * std::log(y[0]) - log_accept_bound_;
                double u = rng.uniform01();
                if (std::log(u) < log_accept) {
                    ++accepted_;
                    break;
                }
            }
            break;
        }
    }
    ++draws_;
}

OrderedPoint Sampler::draw(RngState& rng) {
    std::vector<double> y(static_cast<size_t>(params_.dim()));
    draw_into(rng, y);
    return OrderedPoint::unchecked(std::move(y));
}

SampleBatch Sampler::draw_batch(RngState& rng, std::size_t n) {
    int d = params_.dim();
    SampleBatch batch;
    batch.d = d;
    batch.columns.assign(static_cast<size_t>(d), {});
    for (auto& col : batch.columns) col.resize(n);
    std::vector<double> y(static_cast<size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
        draw_into(rng, y);
        for (int k = 0; k < d; ++k) {
            batch.columns[static_cast<size_t>(k)][i] = y[static_cast<size_t>(k)];
        }
    }
    return batch;
}

SamplerStats Sampler::stats() const {
    SamplerStats s;
    s.draws = draws_;
    s.proposals = method_ == Method::rejection ? proposals_ : draws_;
    s.accepted = method_ == Method::rejection ? accepted_ : draws_;
    s.acceptance_rate =
        s.proposals == 0 ? 1.0 : static_cast<double>(s.accepted) / static_cast<double>(s.proposals);
    if (table_) {
        s.clipped_mass = table_->clipped_mass();
        s.table_size = table_->size();
    }
    return s;
}

} // namespace grd
