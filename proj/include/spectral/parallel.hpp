// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace spectral {

/// Worker cap: SPECTRAL_COUNT_THREADS when set, otherwise the available
/// hardware parallelism. Always at least 1.
std::size_t worker_count();

/// Runs fn(i) for i in [0, count). Tasks must be independent; each task
/// writes only to its own output slot, so results do not depend on the
/// scheduling order. Exceptions are captured and the first one rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace spectral
