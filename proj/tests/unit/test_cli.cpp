#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string tmp_path(const std::string& name) { return std::string(IR2_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string out = tmp_path("cli_stdout.txt");
  const std::string err = tmp_path("cli_stderr.txt");
  const std::string cmd = env + " \"" IR2_CLI_PATH "\" " + args + " > \"" + out + "\" 2> \"" + err + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string ramp_csv(std::size_t n) {
  std::string s = "y,x,z\n";
  for (std::size_t i = 1; i <= n; ++i) {
    s += std::to_string(i) + "," + std::to_string(i) + "," + std::to_string(i % 3) + "\n";
  }
  return s;
}

}  // namespace

TEST_CASE("coeff on a ramp") {
  const std::string f = tmp_path("ramp.csv");
  write_file(f, ramp_csv(30));
  const Run r = run("coeff -f " + f + " --y y --x x -m nu1d");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["value"] == 1.0);
  CHECK(j["method"] == "nu1d");
  CHECK(j["n"] == 30);
  CHECK(j["n0"] == 2);
  CHECK(j.contains("seed"));
  CHECK(j["standardized"] == false);
  CHECK(run("coeff -f " + f + " --y y --x x").code == 0);
  CHECK(json::parse(run("coeff -f " + f + " --y y --x x").out)["standardized"] == true);
  CHECK(json::parse(run("coeff -f " + f + " --y y --x x --no-standardize").out)["standardized"] == false);
}

TEST_CASE("coeff usage and data errors") {
  const std::string f = tmp_path("ramp2.csv");
  write_file(f, ramp_csv(30));
  CHECK(run("coeff -f " + f + " --y y --x x,z -m nu1d").code == 2);
  CHECK(run("coeff -f " + f + " --y y -m nu").code == 2);
  CHECK(run("coeff -f " + f + " --y y --x nope").code == 3);
  CHECK(run("coeff -f " + tmp_path("missing.csv") + " --y y --x x").code == 3);
  CHECK(run("coeff --bogus").code == 2);
  CHECK(run("").code == 2);
  const std::string flat = tmp_path("flat.csv");
  write_file(flat, "y,x\n1,1\n1,2\n1,3\n1,4\n");
  const Run r = run("coeff -f " + flat + " --y y --x x");
  CHECK(r.code == 4);
  CHECK(json::parse(r.err)["error"] == "degenerate");
}

TEST_CASE("missing values need the drop-rows flag") {
  const std::string f = tmp_path("holes.csv");
  write_file(f, "y,x\n1,1\n2,NA\n3,3\n4,4\n5,5\n");
  CHECK(run("coeff -f " + f + " --y y --x x -m nu1d").code == 3);
  const Run r = run("coeff -f " + f + " --y y --x x -m nu1d --drop-rows");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["dropped_rows"] == 1);
}

TEST_CASE("replicate ties averages seeded runs") {
  const std::string f = tmp_path("ties.csv");
  std::string s = "y,x\n";
  for (int i = 0; i < 40; ++i) s += std::to_string((i * 7) % 13) + "," + std::to_string(i % 4) + "\n";
  write_file(f, s);
  const Run r = run("coeff -f " + f + " --y y --x x -m nu1d --replicate-ties 32 --seed 10");
  REQUIRE(r.code == 0);
  double mean = 0.0;
  for (int k = 0; k < 32; ++k) {
    mean += json::parse(run("coeff -f " + f + " --y y --x x -m nu1d --seed " + std::to_string(10 + k)).out)["value"]
                .get<double>();
  }
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(mean / 32.0).epsilon(1e-12));
}

TEST_CASE("seed defaults, environment override and reproducibility") {
  const std::string f = tmp_path("ramp3.csv");
  write_file(f, ramp_csv(25));
  const Run a = run("coeff -f " + f + " --y y --x z -m nu1d");
  const Run b = run("coeff -f " + f + " --y y --x z -m nu1d");
  CHECK(a.out == b.out);
  const Run c = run("coeff -f " + f + " --y y --x z -m nu1d", "IR2_SEED=5");
  CHECK(json::parse(c.out)["seed"] == 5);
  CHECK(run("coeff -f " + f + " --y y --x z -m nu1d --seed 1 --entropy-seed").code == 2);
  CHECK(run("coeff -f " + f + " --y y --x z -m nu1d", "IR2_SEED=abc").code == 2);
  CHECK(run("coeff -f " + f + " --y y --x z -m nu1d --entropy-seed").code == 0);
}

TEST_CASE("test command") {
  const std::string f = tmp_path("ramp4.csv");
  write_file(f, ramp_csv(40));
  const Run r = run("test -f " + f + " --y y --x x -B 199");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["p_value"].get<double>() == doctest::Approx(0.005));
  CHECK(j["mode"] == "permutation");
  const std::string small = tmp_path("small.csv");
  write_file(small, ramp_csv(10));
  CHECK(run("test -f " + small + " --y y --x x --mode asymptotic").code == 3);
  const Run asym = run("test -f " + f + " --y y --x x --mode asymptotic");
  REQUIRE(asym.code == 0);
  CHECK(json::parse(asym.out)["mode"] == "asymptotic_conjectured");
  CHECK(run("test -f " + f + " --y y --x x -B 0").code == 2);
}

TEST_CASE("ford command") {
  const std::string f = tmp_path("lm.csv");
  REQUIRE(run("simulate --study sample --model lm --n 1000 --p 10 --seed 3 -o " + f).code == 0);
  const Run r = run("ford -f " + f + " --y y --x x1,x2,x3,x4,x5,x6,x7,x8,x9,x10");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  std::vector<std::string> names = j["chosen_names"];
  for (const char* want : {"x1", "x2", "x3"}) {
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  }
  CHECK(j["scores"].size() == names.size());
  CHECK(j.contains("stop_reason"));
  CHECK(run("ford -f " + f + " --y y").code == 2);
  const Run capped = run("ford -f " + f + " --y y --x x1,x2,x3,x4 --full --max-steps 2");
  CHECK(json::parse(capped.out)["chosen"].size() == 2);
}

TEST_CASE("permdist command") {
  const Run a = run("permdist 1,2,3 3,2,1 --metric footrule");
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["value"] == 4.0);
  const Run b = run("permdist 2,4,1,3 2,4,1,3");
  CHECK(json::parse(b.out)["value"] == 0.0);
  CHECK(run("permdist 1,2,2 1,2,3").code == 3);
  CHECK(run("permdist 1,x,3 1,2,3").code == 3);
  CHECK(run("permdist 1,2,3 1,2,3 --metric nope").code == 2);
  CHECK(run("permdist 1,2,3 1,2,3,4").code == 3);
}

TEST_CASE("simulate command") {
  const std::string out = tmp_path("null.csv");
  const Run r = run("simulate --study null --n 50 --reps 200 -o " + out);
  REQUIRE(r.code == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("study,model,n,param,method,metric,value,mc_se,reps,note", 0) == 0);
  CHECK(text.find("hist_count_") != std::string::npos);
  const Run again = run("simulate --study null --n 50 --reps 200");
  CHECK(again.out == text);
  const Run power = run("simulate --study power --models sinusoid --lambdas 0.5 --reps 10 -B 49 --format jsonl");
  REQUIRE(power.code == 0);
  std::istringstream lines(power.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(json::parse(line)["model"] == "sinusoid");
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(run("simulate --study nope").code == 2);
  CHECK(run("simulate --study power --models nope").code == 2);
  CHECK(run("models").code == 0);
}
