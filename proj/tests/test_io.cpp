#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coxko/csv_io.hpp"
#include "coxko/error.hpp"

using namespace coxko;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("coxko_io_" + name);
  std::ofstream(path) << content;
  return path.string();
}

ErrorKind load_kind(const std::string& content) {
  try {
    load_csv(write_temp("bad.csv", content));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("nki70 file") {
    const auto loaded = load_csv(COXKO_TEST_DATA "/nki70.csv");
    CHECK(loaded.data.n() == 144);
    CHECK(loaded.data.m() == 75);
    CHECK(loaded.data.censoring_rate() == doctest::Approx(0.67).epsilon(0.01));
    CHECK(loaded.data.names()[1] == "N");
    CHECK(loaded.time_text.size() == 144);
  }

  TEST_CASE("malformed inputs") {
    CHECK(load_kind("time,x\n1,2\n") == ErrorKind::MissingColumn);
    CHECK(load_kind("event,x\n1,2\n") == ErrorKind::MissingColumn);
    CHECK(load_kind("time,event,x\n1,1,2\n0,1,3\n") == ErrorKind::NonPositiveTime);
    CHECK(load_kind("time,event,x\n1,1,2\n2,2,3\n") == ErrorKind::BadEventValue);
    CHECK(load_kind("time,event,grade\n1,1,high\n") == ErrorKind::NonNumericCell);
    CHECK(load_kind("time,event,x\n1,1,2\n2,0\n") == ErrorKind::DimensionMismatch);
    try {
      load_csv("/nonexistent/file.csv");
      FAIL("expected Io");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }

  TEST_CASE("error messages carry the location") {
    try {
      load_csv(write_temp("loc.csv", "time,event,x\n1,1,2\n\n3,1,oops\n"));
      FAIL("expected NonNumericCell");
    } catch (const Error& e) {
      const std::string msg = e.what();
      CHECK(msg.find(":4") != std::string::npos);
      CHECK(msg.find("row 2") != std::string::npos);
      CHECK(msg.find("'x'") != std::string::npos);
    }
  }

  TEST_CASE("quoted cells and round trip") {
    std::ostringstream out;
    write_csv(out, {"time", "event", "a,b"}, {{"1.5", "1", "2"}, {"3", "0", "-4e-3"}});
    std::istringstream in(out.str());
    const auto table = parse_csv(in);
    CHECK(table.header[2] == "a,b");
    const auto loaded = load_csv_table(table);
    CHECK(loaded.data.design()(1, 0) == -4e-3);
    CHECK(loaded.data.names()[0] == "a,b");
    CHECK(format_double(0.1) == "0.10000000000000001");
  }
}
