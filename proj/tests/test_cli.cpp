/*
 Copyright 2026 The qent Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" QENT_CLI_PATH "\" " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qent_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("presets list") {
  const auto r = run("presets list");
  CHECK(r.status == 0);
  CHECK(r.out.find("paper-sec4\t") != std::string::npos);
  CHECK(r.out.find("paper-sec4-separable\t") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run("").status != 0);
  CHECK(run("optimize").status == 2);
  CHECK(run("optimize --preset nope").status == 2);
  CHECK(run("optimize --preset paper-sec4 --config x.json").status != 0);
  const auto dir = scratch("missing");
  CHECK(run("optimize --config " + (dir / "absent.json").string()).status == 2);
}

TEST_CASE("repeated optimize runs are byte-identical") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::string args = "optimize --preset paper-sec4 --tf 1 --n-steps 200 --quiet --out-dir ";
  REQUIRE(run(args + a.string()).status == 0);
  REQUIRE(run(args + b.string()).status == 0);
  const auto sa = slurp(a / "summary.json");
  CHECK_FALSE(sa.empty());
  CHECK(sa == slurp(b / "summary.json"));
  CHECK(slurp(a / "timeseries.csv") == slurp(b / "timeseries.csv"));
}

TEST_CASE("out-dir flag beats the environment") {
  const auto env_dir = scratch("env");
  const auto flag_dir = scratch("flag");
  const std::string env = "QENT_OUT_DIR=" + env_dir.string();
  const std::string args = "optimize --preset paper-sec4 --tf 0.5 --n-steps 50 --quiet";
  REQUIRE(run(args, env).status == 0);
  CHECK(fs::exists(env_dir / "summary.json"));
  fs::remove_all(env_dir);
  fs::create_directories(env_dir);
  REQUIRE(run(args + " --out-dir " + flag_dir.string(), env).status == 0);
  CHECK(fs::exists(flag_dir / "summary.json"));
  CHECK_FALSE(fs::exists(env_dir / "summary.json"));
}

TEST_CASE("simulate replays a schedule file") {
  const auto dir = scratch("sim");
  {
    std::ofstream s(dir / "sched.json");
    s << R"({"t0": 0, "tf": 1, "n_steps": 4, "values": [[-1,-1,1,1],[-1,-1,-1,-1],[-1,-1,-1,-1]]})";
  }
  const auto r = run("simulate --preset paper-sec4 --schedule " + (dir / "sched.json").string() + " --out-dir " +
                     dir.string());
  CHECK(r.status == 0);
  CHECK(r.out.find("concurrence_final=") != std::string::npos);
  CHECK(fs::exists(dir / "timeseries.csv"));

  {
    std::ofstream s(dir / "bad.json");
    s << R"({"t0": 0, "tf": 1, "n_steps": 1, "values": [[2],[0],[0]]})";
  }
  CHECK(run("simulate --preset paper-sec4 --schedule " + (dir / "bad.json").string() + " --out-dir " +
            dir.string()).status == 2);
}
