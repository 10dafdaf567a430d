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

#include "cli.hpp"

#include "bsf/bsf.hpp"
#include "bsf/problems/intsum.hpp"
#include "bsf/problems/jacobi.hpp"
#include "bsf/problems/linear_system.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace bsf::cli {

int exit_status(ErrorCode code) noexcept { return 10 + static_cast<int>(code); }

namespace {

using jacobi::LinearSystem;
using jacobi::generate_diagonally_dominant_system;
using jacobi::load_system;
using jacobi::residual_inf_norm;

struct Options {
	std::string problem = "jacobi";
	std::string matrix;
	std::size_t generate = 0;
	std::uint64_t seed = 1;
	double eps = 1e-18;
	std::size_t max_iter = 1'000'000;
	std::size_t workers = 1;
	bool sequential = false;
	std::string transport = "inproc";
	std::string listen = "127.0.0.1:0";
	std::string connect;
	bool trace = false;
	std::size_t trace_count = 1;
	int precision = 4;
	int intra_threads = -1;
	long map_delay_us = 0;
	std::size_t rounds = 3;
	bool ignore_odd = false;
	double timeout_s = 60.0;
	std::vector<std::size_t> k_list;
	std::string csv;
};

int log_level() {
	const char *env = std::getenv("BSF_LOG");
	return env ? std::atoi(env) : 0;
}

// Loads or generates the system once per process; the problem's init and
// the final residual both read it.
class SystemCache {
public:
	explicit SystemCache(const Options &o) : options_(o) {}

	const LinearSystem &get() {
		if (!system_) {
			if (!options_.matrix.empty()) {
				system_ = load_system(options_.matrix);
			} else if (options_.generate > 0) {
				system_ = generate_diagonally_dominant_system(options_.generate, options_.seed);
			} else {
				throw Error(ErrorCode::InvalidConfig, "jacobi needs --matrix FILE or --generate N");
			}
		}
		return *system_;
	}

private:
	Options options_;
	std::optional<LinearSystem> system_;
};

template <typename P, typename M, typename... Rs>
void add_map_delay(Problem<P, M, Rs...> &problem, long delay_us) {
	if (delay_us <= 0) return;
	const std::chrono::microseconds delay{delay_us};
	std::apply(
	    [delay](auto &...job) {
		    ((job.map_f = [inner = job.map_f, delay](const M &elem, const ExecutionContext<P> &ctx) {
			      std::this_thread::sleep_for(delay);
			      return inner(elem, ctx);
		      }),
		     ...);
	    },
	    problem.jobs);
}

RunConfig make_config(const Options &o, std::size_t workers, std::ostream &out, std::ostream &err) {
	RunConfig config;
	config.num_workers = workers;
	config.output_precision = o.precision;
	config.trace_count = o.trace_count;
	config.max_iterations = o.max_iter;
	if (o.intra_threads >= 0) {
		config.intra_worker_parallel = true;
		config.intra_worker_threads = static_cast<std::size_t>(o.intra_threads);
	}
	if (o.trace) {
		config.iter_output_enabled = true;
		config.trace = [&out](std::string_view line) { out << line << '\n'; };
	}
	if (log_level() >= 1) config.output = &err;
	return config;
}

std::chrono::milliseconds timeout_ms(const Options &o) {
	return std::chrono::milliseconds{static_cast<long long>(o.timeout_s * 1000.0)};
}

template <typename Prob>
auto execute(const Prob &problem, const Options &o, std::size_t workers, std::ostream &out,
             std::ostream &err) {
	const RunConfig config = make_config(o, workers, out, err);
	if (o.sequential) return run_sequential(problem, config);
	if (o.transport == "tcp") {
		TcpMasterTransport transport(SocketAddress::parse(o.listen), workers,
		                             TcpOptions{timeout_ms(o), timeout_ms(o)});
		err << "listening on " << SocketAddress::parse(o.listen).host << ':' << transport.port()
		    << std::endl;
		return run_parallel(problem, config, transport);
	}
	InProcessTransport transport(workers, timeout_ms(o));
	return run_parallel(problem, config, transport);
}

struct Summary {
	std::size_t n = 0;
	std::size_t iterations = 0;
	double elapsed = 0.0;
	std::optional<double> residual;
	std::vector<std::pair<std::string, std::string>> fields;
};

std::string format_double(double v, int precision, bool scientific) {
	std::ostringstream s;
	if (scientific) s << std::scientific;
	else s << std::fixed;
	s << std::setprecision(precision) << v;
	return s.str();
}

std::string format_head(const std::vector<double> &x, int precision) {
	std::string text;
	for (std::size_t i = 0; i < std::min<std::size_t>(x.size(), 4); ++i) {
		if (i) text += ',';
		text += format_double(x[i], precision, false);
	}
	if (x.size() > 4) text += ",...";
	return text;
}

Summary run_once(const Options &o, std::size_t workers, std::ostream &out, std::ostream &err) {
	Summary summary;
	if (o.problem == "intsum") {
		intsum::IntSumOptions io;
		io.list_size = o.generate > 0 ? o.generate : io.list_size;
		io.seed = o.seed;
		io.rounds = o.rounds;
		io.ignore_odd = o.ignore_odd;
		auto problem = intsum::make_intsum_problem(io);
		add_map_delay(problem, o.map_delay_us);
		const auto outcome = execute(problem, o, workers, out, err);
		summary.n = io.list_size;
		summary.iterations = outcome.iterations;
		summary.elapsed = outcome.elapsed_seconds;
		summary.fields = {{"total", std::to_string(outcome.final_parameter.total)},
		                  {"scale", std::to_string(outcome.final_parameter.scale)},
		                  {"counter", std::to_string(outcome.reduce<0>().reduce_counter)}};
		return summary;
	}

	auto cache = std::make_shared<SystemCache>(o);
	jacobi::SystemSource source = [cache] { return cache->get(); };
	std::vector<double> x;
	if (o.problem == "jacobi") {
		auto problem = jacobi::make_jacobi_problem(source, o.eps);
		add_map_delay(problem, o.map_delay_us);
		const auto outcome = execute(problem, o, workers, out, err);
		x = outcome.final_parameter.x;
		summary.iterations = outcome.iterations;
		summary.elapsed = outcome.elapsed_seconds;
	} else if (o.problem == "jacobi-map") {
		auto problem = jacobi::make_jacobi_map_only_problem(source, o.eps);
		add_map_delay(problem, o.map_delay_us);
		const auto outcome = execute(problem, o, workers, out, err);
		x = outcome.final_parameter.x;
		summary.iterations = outcome.iterations;
		summary.elapsed = outcome.elapsed_seconds;
	} else {
		throw Error(ErrorCode::InvalidConfig, "unknown problem '" + o.problem + "'");
	}
	const LinearSystem &system = cache->get();
	summary.n = system.n;
	summary.residual = residual_inf_norm(system, x);
	summary.fields = {{"residual", format_double(*summary.residual, 3, true)},
	                  {"x", format_head(x, o.precision)}};
	return summary;
}

void print_report(const Options &o, std::size_t workers, const Summary &s, std::ostream &out) {
	out << "problem=" << o.problem << '\n'
	    << "n=" << s.n << '\n'
	    << "workers=" << (o.sequential ? 1 : workers) << '\n'
	    << "transport=" << (o.sequential ? "sequential" : o.transport) << '\n'
	    << "iterations=" << s.iterations << '\n'
	    << "elapsed_s=" << format_double(s.elapsed, 6, false) << '\n';
	for (const auto &[key, value] : s.fields) out << key << '=' << value << '\n';
}

struct BenchRow {
	std::size_t k = 0;
	std::size_t iterations = 0;
	double elapsed = 0.0;
	double speedup = 1.0;
	std::optional<double> residual;
};

int do_bench(Options o, std::ostream &out, std::ostream &err) {
	if (o.k_list.empty()) o.k_list = {1};
	std::vector<std::size_t> ks = o.k_list;
	if (std::find(ks.begin(), ks.end(), std::size_t{1}) == ks.end()) ks.insert(ks.begin(), 1);

	std::vector<BenchRow> rows;
	std::size_t n = 0;
	double baseline = 0.0;
	for (std::size_t k : ks) {
		const Summary s = run_once(o, k, out, err);
		n = s.n;
		rows.push_back({k, s.iterations, s.elapsed, 1.0, s.residual});
		if (k == 1) baseline = s.elapsed;
		if (log_level() >= 1) err << "bench K=" << k << " elapsed_s=" << s.elapsed << '\n';
	}
	for (auto &row : rows) {
		if (row.k != 1) row.speedup = row.elapsed > 0.0 ? baseline / row.elapsed : 0.0;
	}

	out << std::left << std::setw(12) << "variant" << std::setw(8) << "n" << std::setw(6) << "K"
	    << std::setw(10) << "transport" << std::setw(12) << "iterations" << std::setw(14)
	    << "elapsed_s" << std::setw(10) << "speedup" << "residual" << '\n';
	for (const auto &row : rows) {
		out << std::left << std::setw(12) << o.problem << std::setw(8) << n << std::setw(6) << row.k
		    << std::setw(10) << "inproc" << std::setw(12) << row.iterations << std::setw(14)
		    << format_double(row.elapsed, 6, false) << std::setw(10)
		    << format_double(row.speedup, 3, false)
		    << (row.residual ? format_double(*row.residual, 3, true) : "-") << '\n';
	}

	if (!o.csv.empty()) {
		std::ofstream csv(o.csv);
		if (!csv) throw Error(ErrorCode::IoError, "cannot write " + o.csv);
		csv << "variant,n,K,transport,iterations,elapsed_s,speedup\n";
		for (const auto &row : rows) {
			csv << o.problem << ',' << n << ',' << row.k << ",inproc," << row.iterations << ','
			    << format_double(row.elapsed, 6, false) << ',' << format_double(row.speedup, 6, false)
			    << '\n';
		}
		if (!csv) throw Error(ErrorCode::IoError, "failed writing " + o.csv);
	}
	return 0;
}

template <typename Prob>
void serve(Prob &problem, const Options &o, std::ostream &out, std::ostream &err) {
	if (problem.init && !problem.init()) {
		throw Error(ErrorCode::InitFailed, "problem initialization reported failure");
	}
	TcpWorkerLink link = TcpWorkerLink::connect(SocketAddress::parse(o.connect), timeout_ms(o));
	if (log_level() >= 1) err << "worker rank " << link.rank() << " of " << link.num_workers() << '\n';
	const RunConfig config = make_config(o, link.num_workers(), out, err);
	run_worker(problem, config, link);
}

int do_worker(const Options &o, std::ostream &out, std::ostream &err) {
	if (o.problem == "intsum") {
		intsum::IntSumOptions io;
		io.list_size = o.generate > 0 ? o.generate : io.list_size;
		io.seed = o.seed;
		io.rounds = o.rounds;
		io.ignore_odd = o.ignore_odd;
		auto problem = intsum::make_intsum_problem(io);
		add_map_delay(problem, o.map_delay_us);
		serve(problem, o, out, err);
		return 0;
	}
	auto cache = std::make_shared<SystemCache>(o);
	jacobi::SystemSource source = [cache] { return cache->get(); };
	if (o.problem == "jacobi") {
		auto problem = jacobi::make_jacobi_problem(source, o.eps);
		add_map_delay(problem, o.map_delay_us);
		serve(problem, o, out, err);
	} else if (o.problem == "jacobi-map") {
		auto problem = jacobi::make_jacobi_map_only_problem(source, o.eps);
		add_map_delay(problem, o.map_delay_us);
		serve(problem, o, out, err);
	} else {
		throw Error(ErrorCode::InvalidConfig, "unknown problem '" + o.problem + "'");
	}
	return 0;
}

void add_problem_options(CLI::App &cmd, Options &o) {
	cmd.add_option("--problem", o.problem, "jacobi, jacobi-map or intsum")
	    ->check(CLI::IsMember({"jacobi", "jacobi-map", "intsum"}));
	auto *matrix = cmd.add_option("--matrix", o.matrix, "Read the linear system from FILE");
	auto *generate =
	    cmd.add_option("--generate", o.generate, "Generate a system of order N (intsum: list size)");
	matrix->excludes(generate);
	cmd.add_option("--seed", o.seed, "Generator seed");
	cmd.add_option("--eps", o.eps, "Stop when the squared step norm drops below this");
	cmd.add_option("--rounds", o.rounds, "intsum iteration count");
	cmd.add_flag("--ignore-odd", o.ignore_odd, "intsum: ignore odd-indexed elements");
	cmd.add_option("--intra-threads", o.intra_threads,
	               "Map each sublist with T threads (0 = all cores)");
	cmd.add_option("--map-delay-us", o.map_delay_us, "Sleep this long in every map call");
	cmd.add_option("--timeout", o.timeout_s, "Seconds to wait for peers");
}

void add_run_options(CLI::App &cmd, Options &o) {
	cmd.add_option("--max-iter", o.max_iter, "Iteration limit");
	cmd.add_flag("--trace", o.trace, "Print one line per traced iteration");
	cmd.add_option("--trace-count", o.trace_count, "Trace every k-th iteration");
	cmd.add_option("--precision", o.precision, "Digits after the decimal point in traces");
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
	Options o;
	CLI::App app{"Bulk-synchronous farm runner"};
	app.require_subcommand(1);

	auto *run = app.add_subcommand("run", "Solve one problem instance");
	add_problem_options(*run, o);
	add_run_options(*run, o);
	run->add_option("--workers", o.workers, "Worker count K");
	run->add_flag("--sequential", o.sequential, "Run without workers or transport");
	run->add_option("--transport", o.transport, "inproc or tcp")
	    ->check(CLI::IsMember({"inproc", "tcp"}));
	run->add_option("--listen", o.listen, "Master address for --transport tcp");

	auto *bench = app.add_subcommand("bench", "Time one instance for several worker counts");
	add_problem_options(*bench, o);
	add_run_options(*bench, o);
	bench->add_option("--k-list", o.k_list, "Comma-separated worker counts")->delimiter(',');
	bench->add_option("--csv", o.csv, "Also write the table as CSV");

	auto *worker = app.add_subcommand("worker", "Serve as a TCP worker");
	add_problem_options(*worker, o);
	worker->add_option("--connect", o.connect, "Master address host:port")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? 0 : kExitUsage;
	}

	try {
		if (run->parsed()) {
			const Summary s = run_once(o, o.workers, out, err);
			print_report(o, o.workers, s, out);
			return 0;
		}
		if (bench->parsed()) return do_bench(o, out, err);
		return do_worker(o, out, err);
	} catch (const Error &e) {
		err << "error: " << e.what() << '\n';
		return exit_status(e.code());
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return kExitUnexpected;
	}
}

} // namespace bsf::cli
