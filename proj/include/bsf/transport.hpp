/*
 *   Copyright 2026 The BSF Skeleton Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "bsf/wire.hpp"

#include <chrono>
#include <cstddef>
#include <functional>
#include <vector>

namespace bsf {

/// Worker end of one master-worker link.
class WorkerLink {
public:
	virtual ~WorkerLink() = default;

	virtual std::size_t rank() const = 0;
	virtual std::size_t num_workers() const = 0;

	/// Blocks until the next order arrives. Throws TransportError on a closed link.
	virtual OrderMessage receive_order() = 0;
	virtual void send_result(const ResultMessage &result) = 0;
};

using WorkerBody = std::function<void(WorkerLink &)>;

/**
 * Master end of the star topology: one master, `num_workers()` workers,
 * no worker-to-worker links.
 *
 * Transports that host their workers inside the master's process run
 * `body` for each rank from start_workers(). Transports whose workers are
 * separate processes only establish the links there.
 */
class Transport {
public:
	virtual ~Transport() = default;

	virtual std::size_t num_workers() const = 0;

	virtual void start_workers(const WorkerBody &body) = 0;

	/// Waits for hosted workers to finish. No-op for external workers.
	virtual void join_workers() {}

	/// Delivers an identical copy of `order` to every worker.
	virtual void broadcast_order(const OrderMessage &order) = 0;

	/// Returns exactly one result per worker, ordered by rank.
	virtual std::vector<ResultMessage> gather_results() = 0;

	/// Tears down all links after a master-side failure so workers stop.
	virtual void abort() noexcept = 0;
};

inline constexpr std::chrono::milliseconds kDefaultGatherTimeout{60'000};

} // namespace bsf
