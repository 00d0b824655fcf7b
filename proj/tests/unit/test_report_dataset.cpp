#include <doctest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "ir2/dataset.hpp"
#include "ir2/error.hpp"
#include "ir2/report.hpp"

using namespace ir2;

TEST_CASE("csv_escape") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("report rows and writers") {
  ExperimentReport r;
  r.study = "power";
  r.add({"linear", 100, 0.25, "nu1d", "power", 0.5, 0.02, 500, ""});
  r.add({"lin,ear", 100, 0.0, "xi", "power", 1.0, 0.3, 1, ""});
  CHECK(r.rows[1].note == "single_replicate");
  CHECK(r.rows[1].mc_se == 0.0);
  CHECK(r.find("linear", "nu1d", "power").value == 0.5);
  CHECK_THROWS_AS(r.find("linear", "nu", "power"), std::out_of_range);

  std::ostringstream csv;
  write_csv(r, csv);
  std::istringstream in(csv.str());
  const CsvTable t = parse_csv(in);
  CHECK(t.header == std::vector<std::string>{"study", "model", "n", "param", "method", "metric",
                                             "value", "mc_se", "reps", "note"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][1] == "lin,ear");
  CHECK(t.rows[0][3] == "0.25");

  std::ostringstream jl;
  write_jsonl(r, jl);
  std::istringstream lines(jl.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::ordered_json::parse(line);
    CHECK(j.begin().key() == "study");
    CHECK(j["study"] == "power");
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("parse_csv handles quoting and line endings") {
  std::istringstream in("a,b,c\r\n1,\"x,y\",3\r\n\"q\"\"q\",\"multi\nline\",\n");
  const CsvTable t = parse_csv(in);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x,y");
  CHECK(t.rows[1][0] == "q\"q");
  CHECK(t.rows[1][1] == "multi\nline");
  CHECK(t.rows[1][2].empty());
}

TEST_CASE("parse_csv errors") {
  std::istringstream ragged("a,b\n1,2,3\n");
  CHECK_THROWS_AS(parse_csv(ragged), InputError);
  std::istringstream open("a,b\n\"1,2\n");
  CHECK_THROWS_AS(parse_csv(open), InputError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv(empty), InputError);
  CHECK_THROWS_AS(read_csv_file("/nonexistent/file.csv"), InputError);
}

TEST_CASE("ingest designated columns") {
  std::istringstream in("id,y,x1,x2\nA,1.5,2,3\nB,2.5,NA,4\nC,3.5,1e-3,-2\nD,4,5,6\n");
  const CsvTable t = parse_csv(in);
  CHECK_THROWS_AS(ingest(t, "y", {"x1", "x2"}), InputError);
  IngestOptions opts;
  opts.drop_missing = true;
  const Dataset d = ingest(t, "y", {"x1", "x2"}, opts);
  CHECK(d.dropped_rows == 1);
  CHECK(d.values.rows() == 3);
  CHECK(d.column_names == std::vector<std::string>{"y", "x1", "x2"});
  const Sample s = d.to_sample();
  CHECK(s.y == std::vector<double>{1.5, 3.5, 4});
  CHECK(s.x(1, 0) == 1e-3);
  CHECK(s.x(1, 1) == -2.0);
  CHECK(s.x_names == std::vector<std::string>{"x1", "x2"});

  CHECK_THROWS_AS(ingest(t, "y", {"missing"}), InputError);
  CHECK_THROWS_AS(ingest(t, "y", {"id"}), InputError);
  CHECK_THROWS_AS(ingest(t, "y", {}), InputError);
  CHECK_THROWS_AS(ingest(t, "y", {"y"}), InputError);
}

TEST_CASE("ingest requires three complete rows") {
  std::istringstream in("y,x\n1,2\n,3\n4,5\n");
  const CsvTable t = parse_csv(in);
  IngestOptions opts;
  opts.drop_missing = true;
  CHECK_THROWS_AS(ingest(t, "y", {"x"}, opts), InsufficientSampleError);
}

TEST_CASE("standardize_columns") {
  Matrix x(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = 7.0;
  }
  const Matrix z = standardize_columns(x);
  double m = 0.0, v = 0.0;
  for (std::size_t i = 0; i < 4; ++i) m += z(i, 0);
  for (std::size_t i = 0; i < 4; ++i) v += z(i, 0) * z(i, 0);
  CHECK(m == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(v / 3.0 == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 4; ++i) CHECK(z(i, 1) == 0.0);
}
