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

#include "bsf/config.hpp"
#include "bsf/error.hpp"
#include "bsf/partition.hpp"
#include "bsf/problem.hpp"
#include "bsf/transport.hpp"
#include "bsf/validate.hpp"

#include <chrono>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <mutex>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bsf {

template <typename Parameter, typename... ReduceElems>
struct RunOutcome {
	Parameter final_parameter;
	/// Folded result of the last iteration, typed by the job that ran it.
	std::variant<ExtendedReduceElement<ReduceElems>...> final_reduce;
	std::size_t iterations = 0;
	double elapsed_seconds = 0.0;
	/// Job executed by the last iteration.
	int final_job_case = 0;

	template <std::size_t J = 0>
	const auto &reduce() const {
		return std::get<J>(final_reduce);
	}
};

template <typename P, typename M, typename... Rs>
using OutcomeOf = RunOutcome<P, Rs...>;

/**
 * Folds the values of all elements whose reduce_counter is non-zero, left
 * to right, seeded by the first such element; counters are summed. When no
 * element counts, the result has counter 0 and no value.
 */
template <typename R, typename ReduceF>
ExtendedReduceElement<R> process_extended_reduce_list(std::span<const ExtendedReduceElement<R>> elems,
                                                      const ReduceF &reduce_f) {
	ExtendedReduceElement<R> result;
	for (const auto &elem : elems) {
		if (elem.reduce_counter == 0) {
			continue;
		}
		if (!elem.value) {
			throw Error(ErrorCode::CodecMismatch, "counted reduce element carries no value");
		}
		if (result.value) {
			result.value = reduce_f(*result.value, *elem.value);
		} else {
			result.value = *elem.value;
		}
		result.reduce_counter += elem.reduce_counter;
	}
	return result;
}

template <typename R, typename ReduceF>
ExtendedReduceElement<R> process_extended_reduce_list(const std::vector<ExtendedReduceElement<R>> &elems,
                                                      const ReduceF &reduce_f) {
	return process_extended_reduce_list(std::span<const ExtendedReduceElement<R>>(elems), reduce_f);
}

struct MapOptions {
	bool parallel = false;
	/// 0 = all available threads.
	std::size_t threads = 0;

	static MapOptions from(const RunConfig &config) {
		return {config.intra_worker_parallel, config.intra_worker_threads};
	}
};

/**
 * Applies the job's map_f to every element of a worker's sublist. Output
 * element t corresponds to sublist[t] and has reduce_counter 1, or 0 when
 * map_f declined the element. `ctx` must already describe this sublist and
 * order; number_in_sublist is set per application.
 */
template <typename P, typename M, typename R>
std::vector<ExtendedReduceElement<R>> worker_map(const Job<P, M, R> &job, std::span<const M> sublist,
                                                 const ExecutionContext<P> &ctx,
                                                 MapOptions options = {}) {
	std::vector<ExtendedReduceElement<R>> out(sublist.size());
	auto apply = [&](std::size_t t) {
		ExecutionContext<P> local = ctx;
		detail::ContextAccess::assign_number_in_sublist(local, t);
		std::optional<R> value = job.map_f(sublist[t], local);
		out[t].reduce_counter = value ? 1 : 0;
		out[t].value = std::move(value);
	};

#ifdef _OPENMP
	if (options.parallel && options.threads != 1 && sublist.size() > 1) {
		const int threads = options.threads == 0 ? omp_get_max_threads() : static_cast<int>(options.threads);
		std::exception_ptr failure;
		std::mutex failure_mutex;
		const auto count = static_cast<std::ptrdiff_t>(sublist.size());
#pragma omp parallel for num_threads(threads) schedule(static)
		for (std::ptrdiff_t t = 0; t < count; ++t) {
			try {
				apply(static_cast<std::size_t>(t));
			} catch (...) {
				std::lock_guard lock(failure_mutex);
				if (!failure) {
					failure = std::current_exception();
				}
			}
		}
		if (failure) {
			std::rethrow_exception(failure);
		}
		return out;
	}
#endif
	for (std::size_t t = 0; t < sublist.size(); ++t) {
		apply(t);
	}
	return out;
}

/// Partial folding of a worker's extended reduce-sublist.
template <typename R, typename ReduceF>
ExtendedReduceElement<R> worker_reduce(std::span<const ExtendedReduceElement<R>> extended_sublist,
                                       const ReduceF &reduce_f) {
	return process_extended_reduce_list(extended_sublist, reduce_f);
}

/// Final fold of the workers' partial results, in ascending rank order.
template <typename R, typename ReduceF>
ExtendedReduceElement<R> master_reduce(std::span<const ExtendedReduceElement<R>> partials,
                                       const ReduceF &reduce_f) {
	return process_extended_reduce_list(partials, reduce_f);
}

/// Master-side state carried across iterations.
template <typename Parameter>
struct MasterState {
	Parameter parameter;
	int job_case = 0;
	std::size_t iter_counter = 0;
	std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

	double elapsed_seconds() const {
		return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
	}
};

namespace detail {

inline void check_job_case(int job_case, const RunConfig &config) {
	if (job_case < 0 || job_case > config.max_job_case) {
		throw Error(ErrorCode::InvalidJobCase, "job " + std::to_string(job_case) +
		                                           " is outside 0.." + std::to_string(config.max_job_case));
	}
}

/// Runs the dispatcher ahead of the first iteration (multi-job runs only).
template <typename P, typename M, typename... Rs>
bool initial_dispatch(const Problem<P, M, Rs...> &problem, const RunConfig &config,
                      MasterState<P> &state) {
	if (config.max_job_case == 0 || !problem.job_dispatcher) {
		return false;
	}
	JobDecision decision{state.job_case, false};
	problem.job_dispatcher(state.parameter, decision);
	check_job_case(decision.next_job, config);
	state.job_case = decision.next_job;
	return decision.exit;
}

template <typename P, typename M, typename... Rs>
void emit_parameters(const Problem<P, M, Rs...> &problem, const RunConfig &config, const P &parameter) {
	if (config.output && problem.parameters_output) {
		*config.output << std::fixed << std::setprecision(config.output_precision);
		problem.parameters_output(parameter, *config.output);
	}
}

template <typename P, typename M, typename... Rs>
RunOutcome<P, Rs...> finish(const Problem<P, M, Rs...> &problem, const RunConfig &config,
                            MasterState<P> &state,
                            std::variant<ExtendedReduceElement<Rs>...> final_reduce, int final_job) {
	RunOutcome<P, Rs...> outcome{std::move(state.parameter), std::move(final_reduce), state.iter_counter,
	                             state.elapsed_seconds(), final_job};
	if (config.output) {
		std::visit(
		    [&](const auto &reduce) {
			    with_job(problem, final_job, [&](auto, const auto &job) {
				    using Want = std::remove_cvref_t<decltype(reduce)>;
				    using Have = ExtendedReduceElement<typename std::remove_cvref_t<decltype(job)>::reduce_type>;
				    if constexpr (std::is_same_v<Want, Have>) {
					    if (job.problem_output) {
						    *config.output << std::fixed << std::setprecision(config.output_precision);
						    job.problem_output(reduce, outcome.final_parameter, outcome.elapsed_seconds,
						                       *config.output);
					    }
				    }
			    });
		    },
		    outcome.final_reduce);
	}
	return outcome;
}

} // namespace detail

/**
 * One master step after the final fold: process_results of the current
 * job, then the workflow dispatcher (multi-job runs), then the iteration
 * counter and the optional trace line. Updates `state` and returns the
 * decision; `state.job_case` becomes the next job.
 */
template <typename P, typename M, typename R, typename... Rs>
JobDecision master_iterate(const Problem<P, M, Rs...> &problem, const RunConfig &config,
                           const Job<P, M, R> &job, MasterState<P> &state,
                           const ExtendedReduceElement<R> &reduce_result) {
	const int executed_job = state.job_case;
	JobDecision decision{executed_job, false};
	job.process_results(reduce_result, state.parameter, decision);
	if (config.max_job_case > 0 && problem.job_dispatcher) {
		problem.job_dispatcher(state.parameter, decision);
	}
	detail::check_job_case(decision.next_job, config);
	++state.iter_counter;

	if (config.iter_output_enabled && config.trace && state.iter_counter % config.trace_count == 0) {
		std::ostringstream line;
		line << std::fixed << std::setprecision(config.output_precision);
		line << "iter=" << state.iter_counter << " job=" << executed_job;
		if (job.iter_output) {
			line << ' ';
			job.iter_output(reduce_result, state.parameter, state.elapsed_seconds(), decision.next_job, line);
		}
		config.trace(line.str());
	}
	state.job_case = decision.next_job;
	return decision;
}

/**
 * Runs the problem in a single context: map over the whole list, fold,
 * process results, repeat until a stop decision.
 */
template <typename P, typename M, typename... Rs>
RunOutcome<P, Rs...> run_sequential(const Problem<P, M, Rs...> &problem, const RunConfig &config) {
	check_config(config);
	if (problem.init && !problem.init()) {
		throw Error(ErrorCode::InitFailed, "problem initialization reported failure");
	}
	RunConfig single = config;
	single.num_workers = 1;
	validate(problem, single);

	const std::vector<M> map_list = build_map_list(problem);
	MasterState<P> state{problem.set_init_parameter()};
	detail::emit_parameters(problem, config, state.parameter);
	state.started = std::chrono::steady_clock::now();

	ExecutionContext<P> ctx;
	detail::ContextAccess::assign_worker(ctx, 0, 1, 0, map_list.size());

	std::variant<ExtendedReduceElement<Rs>...> last_reduce;
	int last_job = 0;
	bool exit = detail::initial_dispatch(problem, config, state);
	while (!exit) {
		if (state.iter_counter >= config.max_iterations) {
			throw Error(ErrorCode::IterationLimitExceeded,
			            "no stop after " + std::to_string(config.max_iterations) + " iterations");
		}
		const int job_case = state.job_case;
		detail::with_job(problem, job_case, [&](auto index, const auto &job) {
			// Workers see a copy of the order parameters, as in the parallel engine.
			const P order_parameter = state.parameter;
			detail::ContextAccess::assign_order(ctx, order_parameter, job_case, state.iter_counter);
			const auto elems = worker_map(job, std::span<const M>(map_list), ctx, MapOptions::from(config));
			auto reduced = process_extended_reduce_list(elems, job.reduce_f);
			exit = master_iterate(problem, config, job, state, reduced).exit;
			last_reduce.template emplace<decltype(index)::value>(std::move(reduced));
		});
		last_job = job_case;
	}
	return detail::finish(problem, config, state, std::move(last_reduce), last_job);
}

/**
 * Worker loop: receive an order, map and fold the own sublist, send the
 * partial result; stops at an order whose exit flag is set. `problem` must
 * already be initialized in this process.
 */
template <typename P, typename M, typename... Rs>
void run_worker(const Problem<P, M, Rs...> &problem, const RunConfig &config, WorkerLink &link) {
	const std::size_t rank = link.rank();
	const Partition partition = partition_list(problem.set_list_size(), link.num_workers());
	const SublistAssignment mine = partition[rank];
	const std::vector<M> sublist = build_map_list(problem, mine.offset, mine.length);

	ExecutionContext<P> ctx;
	detail::ContextAccess::assign_worker(ctx, rank, link.num_workers(), mine.offset, mine.length);

	for (std::size_t iteration = 0;; ++iteration) {
		const OrderMessage order = link.receive_order();
		if (order.exit) {
			return;
		}
		detail::check_job_case(order.job_case, config);
		const auto started = std::chrono::steady_clock::now();
		const P parameter = problem.parameter_codec.from_bytes(order.parameter);
		detail::ContextAccess::assign_order(ctx, parameter, order.job_case, iteration);

		ResultMessage result;
		result.worker_rank = static_cast<std::uint32_t>(rank);
		detail::with_job(problem, order.job_case, [&](auto, const auto &job) {
			const auto elems = worker_map(job, std::span<const M>(sublist), ctx, MapOptions::from(config));
			const auto partial = worker_reduce(std::span(elems), job.reduce_f);
			result.reduce_counter = partial.reduce_counter;
			if (partial.reduce_counter > 0) {
				result.value = job.codec.to_bytes(*partial.value);
			}
		});
		result.elapsed = std::chrono::steady_clock::now() - started;
		link.send_result(result);
	}
}

/**
 * Runs the problem on a master plus transport.num_workers() workers. Each
 * iteration the master broadcasts the order, the workers map and fold their
 * sublists, and the master folds the partial results in rank order and
 * computes the next order. A final order with the exit flag releases the
 * workers.
 */
template <typename P, typename M, typename... Rs>
RunOutcome<P, Rs...> run_parallel(const Problem<P, M, Rs...> &problem, const RunConfig &config,
                                  Transport &transport) {
	check_config(config);
	if (transport.num_workers() != config.num_workers) {
		throw Error(ErrorCode::InvalidConfig,
		            "transport connects " + std::to_string(transport.num_workers()) +
		                " workers, config expects " + std::to_string(config.num_workers));
	}
	if (problem.init && !problem.init()) {
		throw Error(ErrorCode::InitFailed, "problem initialization reported failure");
	}
	validate(problem, config);
	const std::size_t num_workers = config.num_workers;

	MasterState<P> state{problem.set_init_parameter()};
	std::variant<ExtendedReduceElement<Rs>...> last_reduce;
	int last_job = 0;
	bool limit_hit = false;

	try {
		transport.start_workers([&problem, &config](WorkerLink &link) { run_worker(problem, config, link); });
		detail::emit_parameters(problem, config, state.parameter);
		state.started = std::chrono::steady_clock::now();

		bool exit = detail::initial_dispatch(problem, config, state);
		while (!exit) {
			if (state.iter_counter >= config.max_iterations) {
				limit_hit = true;
				break;
			}
			const int job_case = state.job_case;
			transport.broadcast_order(OrderMessage{static_cast<std::uint8_t>(job_case), false,
			                                       problem.parameter_codec.to_bytes(state.parameter)});
			const std::vector<ResultMessage> results = transport.gather_results();
			if (results.size() != num_workers) {
				throw TransportError(-1, "expected " + std::to_string(num_workers) + " results, got " +
				                             std::to_string(results.size()));
			}
			detail::with_job(problem, job_case, [&](auto index, const auto &job) {
				using R = typename std::remove_cvref_t<decltype(job)>::reduce_type;
				std::vector<ExtendedReduceElement<R>> partials(num_workers);
				for (std::size_t rank = 0; rank < num_workers; ++rank) {
					partials[rank].reduce_counter = results[rank].reduce_counter;
					if (results[rank].reduce_counter > 0) {
						partials[rank].value = job.codec.from_bytes(results[rank].value);
					}
				}
				auto reduced = master_reduce(std::span<const ExtendedReduceElement<R>>(partials), job.reduce_f);
				exit = master_iterate(problem, config, job, state, reduced).exit;
				last_reduce.template emplace<decltype(index)::value>(std::move(reduced));
			});
			last_job = job_case;
		}
		transport.broadcast_order(OrderMessage{static_cast<std::uint8_t>(state.job_case), true,
		                                       problem.parameter_codec.to_bytes(state.parameter)});
	} catch (...) {
		transport.abort();
		transport.join_workers();
		throw;
	}
	transport.join_workers();

	if (limit_hit) {
		throw Error(ErrorCode::IterationLimitExceeded,
		            "no stop after " + std::to_string(config.max_iterations) + " iterations");
	}
	return detail::finish(problem, config, state, std::move(last_reduce), last_job);
}

} // namespace bsf
