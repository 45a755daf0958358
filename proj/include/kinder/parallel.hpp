#pragma once

// Deterministic per-task seeding and a small fork/join loop. Results are
// always written by index, so merges do not depend on scheduling.

#include <cstdint>
#include <functional>
#include <random>

namespace kinder {

std::uint64_t splitmix64(std::uint64_t x);
// Seed for task `index` of a run keyed by `seed`.
std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index);
std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t index);

// 0 means hardware concurrency.
unsigned resolve_workers(unsigned requested);

// Calls fn(i) for i in [0, count) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::uint64_t count, unsigned workers, const std::function<void(std::uint64_t)>& fn);

}  // namespace kinder
