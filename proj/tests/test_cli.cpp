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

#include <doctest.h>

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using bsf::ErrorCode;
using bsf::cli::exit_status;

namespace {

struct Invocation {
	int status = 0;
	std::string out;
	std::string err;
};

Invocation cli(std::vector<std::string> args) {
	args.insert(args.begin(), "bsf");
	std::vector<const char *> argv;
	for (const auto &a : args) argv.push_back(a.c_str());
	std::ostringstream out, err;
	const int status = bsf::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
	return {status, out.str(), err.str()};
}

std::string field(const std::string &report, const std::string &key) {
	std::istringstream in(report);
	std::string line;
	while (std::getline(in, line)) {
		if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
	}
	return {};
}

fs::path scratch(const std::string &name) {
	return fs::temp_directory_path() / ("bsf_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::vector<std::string> read_lines(const fs::path &path) {
	std::ifstream in(path);
	std::vector<std::string> lines;
	for (std::string line; std::getline(in, line);) lines.push_back(line);
	return lines;
}

} // namespace

TEST_CASE("run converges on a generated system") {
	const auto r = cli({"run", "--problem", "jacobi", "--generate", "64", "--seed", "1", "--workers", "4",
	                    "--transport", "inproc", "--eps", "1e-18"});
	REQUIRE(r.status == 0);
	CHECK(std::stod(field(r.out, "residual")) < 1e-6);
	CHECK(field(r.out, "iterations") == "12");
	CHECK(field(r.out, "n") == "64");
	CHECK(field(r.out, "workers") == "4");
}

TEST_CASE("run sequential and parallel report the same solution") {
	const auto seq = cli({"run", "--generate", "32", "--seed", "5", "--sequential"});
	const auto par = cli({"run", "--generate", "32", "--seed", "5", "--workers", "3"});
	REQUIRE(seq.status == 0);
	REQUIRE(par.status == 0);
	CHECK(field(seq.out, "iterations") == field(par.out, "iterations"));
	CHECK(field(seq.out, "x") == field(par.out, "x"));
	CHECK(field(seq.out, "residual") == field(par.out, "residual"));
	CHECK(field(seq.out, "transport") == "sequential");
}

TEST_CASE("run jacobi-map matches jacobi") {
	const auto full = cli({"run", "--generate", "40", "--seed", "2", "--workers", "3"});
	const auto map_only =
	    cli({"run", "--problem", "jacobi-map", "--generate", "40", "--seed", "2", "--workers", "3"});
	REQUIRE(full.status == 0);
	REQUIRE(map_only.status == 0);
	CHECK(field(full.out, "iterations") == field(map_only.out, "iterations"));
	CHECK(field(full.out, "x") == field(map_only.out, "x"));
}

TEST_CASE("run reads a matrix file") {
	const auto path = scratch("two.txt");
	{
		std::ofstream f(path);
		f << "2\n2 1\n1 3\n3 4\n";
	}
	const auto r = cli({"run", "--matrix", path.string(), "--workers", "2"});
	fs::remove(path);
	REQUIRE(r.status == 0);
	CHECK(field(r.out, "iterations") == "24");
	CHECK(field(r.out, "x") == "1.0000,1.0000");
}

TEST_CASE("run with a zero diagonal names ZeroDiagonal") {
	const auto path = scratch("bad.txt");
	{
		std::ofstream f(path);
		f << "2\n0 1\n1 3\n3 4\n";
	}
	const auto r = cli({"run", "--problem", "jacobi", "--matrix", path.string()});
	fs::remove(path);
	CHECK(r.status == exit_status(ErrorCode::ZeroDiagonal));
	CHECK(r.err.find("ZeroDiagonal") != std::string::npos);
}

TEST_CASE("run with more workers than elements is ListTooShort") {
	const auto r = cli({"run", "--workers", "8", "--generate", "4"});
	CHECK(r.status == exit_status(ErrorCode::ListTooShort));
	CHECK(r.err.find("ListTooShort") != std::string::npos);
}

TEST_CASE("run hits the iteration limit") {
	const auto r = cli({"run", "--generate", "64", "--max-iter", "3"});
	CHECK(r.status == exit_status(ErrorCode::IterationLimitExceeded));
}

TEST_CASE("run rejects invalid configuration") {
	CHECK(cli({"run", "--generate", "8", "--trace-count", "0"}).status ==
	      exit_status(ErrorCode::InvalidConfig));
	CHECK(cli({"run", "--generate", "8", "--precision", "99"}).status ==
	      exit_status(ErrorCode::InvalidConfig));
	CHECK(cli({"run"}).status == exit_status(ErrorCode::InvalidConfig));
}

TEST_CASE("usage errors") {
	CHECK(cli({}).status == bsf::cli::kExitUsage);
	CHECK(cli({"run", "--bogus"}).status == bsf::cli::kExitUsage);
	CHECK(cli({"run", "--problem", "nope"}).status == bsf::cli::kExitUsage);
	CHECK(cli({"run", "--matrix", "a", "--generate", "3"}).status == bsf::cli::kExitUsage);
	CHECK(cli({"worker"}).status == bsf::cli::kExitUsage);
	CHECK(cli({"--help"}).status == 0);
}

TEST_CASE("exit statuses are distinct") {
	std::set<int> seen;
	for (int c = 0; c <= static_cast<int>(ErrorCode::IoError); ++c) {
		const int s = exit_status(static_cast<ErrorCode>(c));
		CHECK(s > 0);
		CHECK(s < 126);
		CHECK(s != bsf::cli::kExitUsage);
		CHECK(s != bsf::cli::kExitUnexpected);
		seen.insert(s);
	}
	CHECK(seen.size() == static_cast<std::size_t>(ErrorCode::IoError) + 1);
}

TEST_CASE("trace cadence and precision") {
	const auto r = cli({"run", "--generate", "8", "--seed", "3", "--trace", "--trace-count", "5",
	                    "--precision", "2"});
	REQUIRE(r.status == 0);
	std::istringstream in(r.out);
	std::vector<std::string> traces;
	for (std::string line; std::getline(in, line);) {
		if (line.rfind("iter=", 0) == 0) traces.push_back(line);
	}
	REQUIRE(traces.size() == 4); // 21 iterations
	CHECK(traces[0].rfind("iter=5 job=0 x=", 0) == 0);
	CHECK(traces[3].rfind("iter=20 ", 0) == 0);
	const auto x = traces[0].substr(traces[0].find("x=") + 2);
	CHECK(x.substr(0, x.find(',')).size() == x.substr(0, x.find(',')).find('.') + 3);
}

TEST_CASE("run intsum reports the reference total") {
	const auto a = cli({"run", "--problem", "intsum", "--generate", "500", "--seed", "9", "--workers", "1"});
	const auto b = cli({"run", "--problem", "intsum", "--generate", "500", "--seed", "9", "--workers", "7"});
	REQUIRE(a.status == 0);
	REQUIRE(b.status == 0);
	CHECK(field(a.out, "total") == field(b.out, "total"));
	CHECK(field(a.out, "iterations") == "3");
	const auto odd = cli({"run", "--problem", "intsum", "--generate", "11", "--ignore-odd", "--workers", "3"});
	CHECK(field(odd.out, "counter") == "6");
}

TEST_CASE("bench with a single K") {
	const auto csv = scratch("single.csv");
	const auto r = cli({"bench", "--generate", "16", "--k-list", "1", "--csv", csv.string()});
	REQUIRE(r.status == 0);
	const auto lines = read_lines(csv);
	fs::remove(csv);
	REQUIRE(lines.size() == 2);
	CHECK(lines[0] == "variant,n,K,transport,iterations,elapsed_s,speedup");
	CHECK(lines[1].rfind("jacobi,16,1,inproc,", 0) == 0);
	CHECK(lines[1].substr(lines[1].rfind(',') + 1) == "1.000000");
}

TEST_CASE("bench runs one instance per K") {
	const auto csv = scratch("multi.csv");
	const auto r = cli({"bench", "--problem", "intsum", "--generate", "60", "--map-delay-us", "200",
	                    "--k-list", "1,2,4", "--csv", csv.string()});
	REQUIRE(r.status == 0);
	const auto lines = read_lines(csv);
	fs::remove(csv);
	REQUIRE(lines.size() == 4);
	std::set<std::string> iterations;
	for (std::size_t i = 1; i < lines.size(); ++i) {
		std::vector<std::string> cells;
		std::istringstream row(lines[i]);
		for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
		REQUIRE(cells.size() == 7);
		CHECK(cells[0] == "intsum");
		CHECK(cells[1] == "60");
		CHECK(cells[3] == "inproc");
		iterations.insert(cells[4]);
	}
	CHECK(iterations.size() == 1);
	CHECK(r.out.find("speedup") != std::string::npos);
}

TEST_CASE("bench always includes a K=1 baseline") {
	const auto csv = scratch("baseline.csv");
	const auto r = cli({"bench", "--generate", "16", "--k-list", "2", "--csv", csv.string()});
	REQUIRE(r.status == 0);
	const auto lines = read_lines(csv);
	fs::remove(csv);
	REQUIRE(lines.size() == 3);
	CHECK(lines[1].rfind("jacobi,16,1,", 0) == 0);
	CHECK(lines[2].rfind("jacobi,16,2,", 0) == 0);
}

TEST_CASE("bench with a missing matrix writes no CSV") {
	const auto csv = scratch("missing.csv");
	const auto r = cli({"bench", "--matrix", scratch("absent.txt").string(), "--k-list", "1,2",
	                    "--csv", csv.string()});
	CHECK(r.status == exit_status(ErrorCode::IoError));
	CHECK_FALSE(fs::exists(csv));
}

TEST_CASE("worker without a master fails after the connect timeout") {
	const auto r = cli({"worker", "--connect", "127.0.0.1:1", "--generate", "8", "--timeout", "0.3"});
	CHECK(r.status == exit_status(ErrorCode::TransportFailure));
	CHECK(r.err.find("TransportFailure") != std::string::npos);
}
