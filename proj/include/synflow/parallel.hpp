// Copyright 2026 The synflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace synflow {

/// Worker cap: SYNFLOW_THREADS if set (minimum 1), otherwise the hardware
/// concurrency. Read once per process.
std::size_t max_threads();

/// Runs fn(i) for i in [0, n) across up to max_threads() workers. Work items
/// must be independent; exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace synflow
