//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/parallel.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace drb
{
//---------------------------------------------------------------------------//
/*!
 * Call fn(i) for i in [0, n) on up to `workers` threads.
 *
 * Work is split into contiguous blocks. Callers write results into
 * preallocated slots by index, so the output never depends on scheduling.
 * The first exception thrown by any worker is rethrown here.
 */
template<class F>
void parallel_for(std::size_t n, std::size_t workers, F&& fn)
{
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t const block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
    {
        std::size_t const begin = w * block;
        std::size_t const end = std::min(n, begin + block);
        if (begin >= end)
            break;
        threads.emplace_back([&, begin, end] {
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace drb
