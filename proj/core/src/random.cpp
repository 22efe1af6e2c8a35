#include "thetasub/random.hpp"

#include <cmath>
#include <utility>

#include "thetasub/error.hpp"

namespace thetasub
{
namespace
{
inline std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}
}  // namespace

std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t key = SplitMix64(seed)();
    for (std::uint64_t tag : tags)
    {
        key = SplitMix64(key ^ (tag * 0xd1b54a32d192ed03ull + 0x8bb84b93962eacc9ull))();
    }
    return key;
}

RngStream::RngStream(std::uint64_t key)
{
    SplitMix64 init(key);
    for (auto& word : s_)
        word = init();
}

RngStream::result_type RngStream::operator()()
{
    std::uint64_t const result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t const t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform()
{
    // 53 random bits centred in their cell: never 0 or 1.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal()
{
    if (has_spare_normal_)
    {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do
    {
        u = 2 * uniform() - 1;
        v = 2 * uniform() - 1;
        s = u * u + v * v;
    } while (s >= 1 || s == 0);
    double const f = std::sqrt(-2 * std::log(s) / s);
    spare_normal_ = v * f;
    has_spare_normal_ = true;
    return u * f;
}

double RngStream::log_gamma(double shape)
{
    if (!(shape > 0) || !std::isfinite(shape))
        throw DomainError("RngStream::log_gamma: shape must be finite and > 0");

    double const boosted = shape < 1 ? shape + 1 : shape;
    double const d = boosted - 1.0 / 3.0;
    double const c = 1 / std::sqrt(9 * d);
    double z, v, u;
    for (;;)
    {
        do
        {
            z = normal();
            v = 1 + c * z;
        } while (v <= 0);
        v = v * v * v;
        u = uniform();
        if (u < 1 - 0.0331 * (z * z) * (z * z))
            break;
        if (std::log(u) < 0.5 * z * z + d * (1 - v + std::log(v)))
            break;
    }
    double result = std::log(d * v);
    if (shape < 1)
        result += std::log(uniform()) / shape;
    return result;
}

double RngStream::gamma(double shape, double rate)
{
    if (!(rate > 0))
        throw DomainError("RngStream::gamma: rate must be > 0");
    return std::exp(log_gamma(shape)) / rate;
}

double RngStream::log_beta(double a, double b)
{
    double const ga = log_gamma(a);
    double const gb = log_gamma(b);
    return ga - log_add_exp(ga, gb);
}

double log_add_exp(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    if (std::isinf(a) && a < 0)
        return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace thetasub
