//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/philox.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>

namespace drb
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator.
 *
 * Output is a pure function of (key, counter), so any draw can be located
 * directly from a (seed, event, consumer, ...) tuple without replaying a
 * stream. This is what keeps simulation results independent of the order
 * and thread in which events are evaluated.
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += kW0;
                key[1] += kW1;
            }
            std::uint64_t const p0 = std::uint64_t{kM0} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{kM1} * ctr[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kM0 = 0xD2511F53;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57;
    static constexpr std::uint32_t kW0 = 0x9E3779B9;
    static constexpr std::uint32_t kW1 = 0xBB67AE85;
};

//---------------------------------------------------------------------------//
/*!
 * Random stream addressed by (seed, domain, a, b).
 *
 * Successive calls walk the low counter word; the other three words hold
 * the caller's coordinates, e.g. (selection, event) or (theta, event,
 * consumer).
 */
class CounterRng
{
  public:
    CounterRng(std::uint64_t seed,
               std::uint32_t domain,
               std::uint32_t a,
               std::uint32_t b = 0)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)}
        , domain_(domain)
        , a_(a)
        , b_(b)
    {
    }

    //! Next 64 random bits.
    std::uint64_t next_u64() noexcept
    {
        if (used_ >= 2)
        {
            buffer_ = Philox4x32::block({index_++, domain_, a_, b_}, key_);
            used_ = 0;
        }
        auto const lo = buffer_[2 * used_];
        auto const hi = buffer_[2 * used_ + 1];
        ++used_;
        return (std::uint64_t{hi} << 32) | lo;
    }

    //! Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    //! Uniform integer in [0, n) without modulo bias.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        std::uint64_t const limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
        std::uint64_t x = next_u64();
        while (x >= limit)
        {
            x = next_u64();
        }
        return x % n;
    }

  private:
    Philox4x32::Key key_;
    std::uint32_t domain_;
    std::uint32_t a_;
    std::uint32_t b_;
    std::uint32_t index_{0};
    Philox4x32::Counter buffer_{};
    int used_{2};
};

//! Counter domains used across the simulator.
namespace rng_domain
{
inline constexpr std::uint32_t theta_plan = 1;
inline constexpr std::uint32_t group_select = 2;
inline constexpr std::uint32_t event_theta = 3;
inline constexpr std::uint32_t horizon_theta = 4;
}  // namespace rng_domain

}  // namespace drb
