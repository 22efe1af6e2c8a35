#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * SplitMix64 mixer, used to hash (seed, tags...) into stream keys and to
 * expand a key into xoshiro state.
 */
class SplitMix64
{
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

//! Key for an independent stream addressed by a seed and a tag path, e.g.
//! (seed, purpose, iteration, segment). Distinct paths give unrelated keys.
std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

//---------------------------------------------------------------------------//
/*!
 * A reproducible random stream (xoshiro256** seeded from a 64-bit key).
 *
 * Streams are cheap to construct, so callers build one per unit of work
 * (segment, iteration, move) from stream_key(). The variate generators below
 * are implemented here rather than taken from <random> so that output is
 * identical across standard libraries.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t key);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    //! Uniform on the open interval (0, 1).
    double uniform();

    //! Standard normal (Marsaglia polar method).
    double normal();

    /*!
     * Log of a Gamma(shape, 1) variate.
     *
     * Marsaglia-Tsang for shape >= 1; for shape < 1 the boost
     * log G(shape+1) + log(U)/shape is kept in log space, so tiny shapes
     * (e.g. 0.005) never underflow.
     */
    double log_gamma(double shape);

    //! Gamma(shape, rate) variate; may underflow to 0 for tiny shapes.
    double gamma(double shape, double rate);

    //! Log of a Beta(a, b) variate via two log-gamma draws.
    double log_beta(double a, double b);

  private:
    std::array<std::uint64_t, 4> s_;
    bool has_spare_normal_{false};
    double spare_normal_{0};
};

//! log(exp(a) + exp(b)) without overflow; handles -inf inputs.
double log_add_exp(double a, double b);

}  // namespace thetasub
