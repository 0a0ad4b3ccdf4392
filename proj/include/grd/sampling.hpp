#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "grd/compositions.hpp"
#include "grd/params.hpp"

namespace grd {

/// Deterministic random stream. The generator is std::mt19937_64 (bit-exact
/// across platforms by the C++ standard); uniforms map the top 53 bits to
/// [0, 1), and exponentials use inversion, Z = -log(1 - U)/rate, so equal
/// seeds give byte-identical streams everywhere.
class RngState {
  public:
    explicit RngState(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate via inversion (finite for all draws).
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  private:
    std::mt19937_64 engine_;
};

/// Rebuilds the point from log gaps z_k = log Y_{k-1} - log Y_k (z size d-1,
/// entries >= 0): Y_1 = 1/(1 + sum_{k=2}^d exp(-(z_2+...+z_k))), then
/// Y_k = Y_{k-1} exp(-z_k). The all-zero vector maps to the barycenter
/// (1/d, ..., 1/d).
OrderedPoint point_from_loggaps(std::span<const double> z);

/// Inverse map: z_k = log(Y_{k-1}/Y_k); requires y_d > 0.
std::vector<double> loggaps_from_point(const OrderedPoint& y);

enum class Method {
    zero_sum,     ///< independent exponential log gaps; requires sum(a) == 0
    exact,        ///< finite mixture over compositions; requires sum(a) == -M
    approximate,  ///< truncated series mixture; any valid parameters
    rejection,    ///< zero-sum proposal with acceptance Y_1^{sum(a)} / bound
};

const char* method_name(Method m);

struct SamplerStats {
    std::uint64_t draws = 0;      ///< points returned
    std::uint64_t proposals = 0;  ///< rejection proposals (== draws otherwise)
    std::uint64_t accepted = 0;
    double acceptance_rate = 1.0;  ///< accepted / proposals
    double clipped_mass = 0.0;     ///< negative truncated-weight mass (approximate)
    std::size_t table_size = 0;    ///< mixture table entries (0 if none)
};

/// Columnar sample storage: column(k) holds n values of Y_{k+1}.
struct SampleBatch {
    int d = 0;
    std::vector<std::vector<double>> columns;

    std::size_t size() const { return columns.empty() ? 0 : columns[0].size(); }
    std::span<const double> column(int k) const { return columns.at(static_cast<size_t>(k)); }
};

/// Draws from the distribution by one of four routes. Construction validates
/// the method against the parameter case (Error(method_case_mismatch)):
/// zero_sum needs sum(a) == 0; exact needs integer sum(a) == -M (M >= 0);
/// approximate and rejection accept any valid parameters.
///
/// Per draw the stream consumption is fixed for the table methods (one
/// uniform for the mixture index, then d-1 exponentials in k order) and for
/// zero_sum (d-1 exponentials); rejection consumes d-1 exponentials plus one
/// uniform per proposal until acceptance.
class Sampler {
  public:
    Sampler(Params p, Method method, int truncation = 20,
            std::size_t cap = default_composition_cap);

    const Params& params() const noexcept { return params_; }
    Method method() const noexcept { return method_; }

    /// The mixture table backing exact/approximate methods, if any.
    const MixtureTable* table() const noexcept { return table_ ? &*table_ : nullptr; }

    OrderedPoint draw(RngState& rng);
    SampleBatch draw_batch(RngState& rng, std::size_t n);

    SamplerStats stats() const;

  private:
    void draw_into(RngState& rng, std::span<double> y);

    Params params_;
    Method method_;
    std::optional<MixtureTable> table_;
    std::vector<double> zero_sum_rates_;  ///< tails 2..d (zero_sum / rejection proposal)
    double log_accept_bound_ = 0.0;       ///< rejection: log B, B = max(1, d^{-sum(a)})
    std::uint64_t draws_ = 0;
    std::uint64_t proposals_ = 0;
    std::uint64_t accepted_ = 0;
    std::vector<double> scratch_z_;
};

} // namespace grd
