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

#include "bsf/bytes.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <tuple>
#include <type_traits>

namespace bsf {

/// Jobs are numbered 0..kMaxJobCase; job 0 is where every run starts.
inline constexpr int kMaxJobCase = 3;

namespace detail {
struct ContextAccess;
}

/**
 * Skeleton variables visible to problem callbacks. Callbacks receive it by
 * const reference; only the engine assigns it.
 *
 * The master rank equals num_workers(); workers are ranks 0..num_workers()-1.
 */
template <typename Parameter>
class ExecutionContext {
public:
	/// Global index of the first element of this worker's map-sublist.
	std::size_t address_offset() const noexcept { return address_offset_; }
	/// Iterations completed so far.
	std::size_t iter_counter() const noexcept { return iter_counter_; }
	int job_case() const noexcept { return job_case_; }
	std::size_t rank() const noexcept { return rank_; }
	std::size_t master_rank() const noexcept { return num_workers_; }
	/// Position, within the sublist, of the element currently being mapped.
	std::size_t number_in_sublist() const noexcept { return number_in_sublist_; }
	std::size_t num_workers() const noexcept { return num_workers_; }
	std::size_t sublist_length() const noexcept { return sublist_length_; }
	/// The order parameters of the current iteration.
	const Parameter &parameter() const noexcept { return *parameter_; }

private:
	friend struct detail::ContextAccess;

	std::size_t address_offset_ = 0;
	std::size_t iter_counter_ = 0;
	int job_case_ = 0;
	std::size_t rank_ = 0;
	std::size_t number_in_sublist_ = 0;
	std::size_t num_workers_ = 1;
	std::size_t sublist_length_ = 0;
	const Parameter *parameter_ = nullptr;
};

/// A reduce-list value paired with its reduceCounter. A counter of zero
/// means the value takes no part in folding; such elements carry no value.
template <typename ReduceElem>
struct ExtendedReduceElement {
	std::optional<ReduceElem> value;
	std::uint64_t reduce_counter = 0;

	bool operator==(const ExtendedReduceElement &) const = default;
};

/// Next job and stop flag, pre-filled by the engine with (current job, false).
struct JobDecision {
	int next_job = 0;
	bool exit = false;
};

/// Callback family for one job of a workflow.
template <typename Parameter, typename MapElem, typename ReduceElem>
struct Job {
	using reduce_type = ReduceElem;

	/// Maps one map-list element. Returning std::nullopt marks the element
	/// as ignored (reduceCounter 0). May run concurrently on distinct
	/// elements when intra-worker parallelism is on.
	std::function<std::optional<ReduceElem>(const MapElem &, const ExecutionContext<Parameter> &)>
	    map_f;

	/// z = x (+) y; must be associative.
	std::function<ReduceElem(const ReduceElem &, const ReduceElem &)> reduce_f;

	/// Computes the next order parameters from the folded result and decides
	/// the next job and whether to stop. Receives an owned parameter, never
	/// the workers' copy. Must tolerate a result with reduce_counter 0.
	std::function<void(const ExtendedReduceElement<ReduceElem> &, Parameter &, JobDecision &)>
	    process_results;

	/// Appends problem-defined fields to an iteration trace line. The stream
	/// is preset to fixed notation with the configured precision.
	std::function<void(const ExtendedReduceElement<ReduceElem> &, const Parameter &,
	                   double elapsed_seconds, int next_job, std::ostream &)>
	    iter_output;

	std::function<void(const ExtendedReduceElement<ReduceElem> &, const Parameter &,
	                   double elapsed_seconds, std::ostream &)>
	    problem_output;

	Codec<ReduceElem> codec;
};

/**
 * The callbacks and types that define one iterative algorithm.
 *
 * `ReduceElems` lists the reduce-element type of each job, job 0 first;
 * one to four jobs are supported. All jobs share the map-element type.
 * Parameter must be copyable by value: the engine copies it at every order.
 */
template <typename Parameter, typename MapElem, typename... ReduceElems>
struct Problem {
	static_assert(sizeof...(ReduceElems) >= 1 && sizeof...(ReduceElems) <= kMaxJobCase + 1,
	              "a problem defines between one and four jobs");
	static_assert(std::is_copy_constructible_v<Parameter>, "Parameter must be copyable");

	using parameter_type = Parameter;
	using map_elem_type = MapElem;
	static constexpr std::size_t job_count = sizeof...(ReduceElems);

	/// Loads problem data. Returning false aborts the run with InitFailed.
	std::function<bool()> init;
	std::function<std::size_t()> set_list_size;
	/// Builds map-list element `i`; numbering starts at zero.
	std::function<MapElem(std::size_t)> set_map_list_elem;
	std::function<Parameter()> set_init_parameter;
	/// Workflow state machine, run before every iteration when the run has
	/// more than one job. Its decision overrides the one of process_results.
	std::function<void(Parameter &, JobDecision &)> job_dispatcher;
	std::function<void(const Parameter &, std::ostream &)> parameters_output;
	Codec<Parameter> parameter_codec;

	std::tuple<Job<Parameter, MapElem, ReduceElems>...> jobs;

	template <std::size_t J>
	auto &job() noexcept {
		return std::get<J>(jobs);
	}
	template <std::size_t J>
	const auto &job() const noexcept {
		return std::get<J>(jobs);
	}
};

namespace detail {

struct ContextAccess {
	template <typename P>
	static void assign_worker(ExecutionContext<P> &ctx, std::size_t rank, std::size_t num_workers,
	                          std::size_t address_offset, std::size_t sublist_length) {
		ctx.rank_ = rank;
		ctx.num_workers_ = num_workers;
		ctx.address_offset_ = address_offset;
		ctx.sublist_length_ = sublist_length;
	}
	template <typename P>
	static void assign_order(ExecutionContext<P> &ctx, const P &parameter, int job_case,
	                         std::size_t iter_counter) {
		ctx.parameter_ = &parameter;
		ctx.job_case_ = job_case;
		ctx.iter_counter_ = iter_counter;
	}
	template <typename P>
	static void assign_number_in_sublist(ExecutionContext<P> &ctx, std::size_t number) {
		ctx.number_in_sublist_ = number;
	}
};

} // namespace detail
} // namespace bsf
