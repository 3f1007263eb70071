#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "twistforge/pipeline.hpp"
#include "twistforge/reader.hpp"

using namespace twistforge;
using nlohmann::json;

namespace {

RunConfig config(const json& j) { return config_from_json(j); }

CommandResult run(const std::string& cmd, const json& j) { return run_command(cmd, config(j)); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream l(line);
    std::string cell;
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("derive iso2 text") {
  auto r = run("derive", {{"preset", "iso2"}, {"order", 4}, {"format", "text"}});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[x0,x1] = 2*i*hbar*alpha*x2\n") != std::string::npos);
}

TEST_CASE("derive iso11 json") {
  auto r = run("derive", {{"preset", "iso11"}, {"format", "json"}});
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  bool found = false;
  for (const auto& e : j["relations"]["relations"])
    if (e["pair"] == json::array({"x3", "x1"})) {
      found = true;
      CHECK(e["value"] == "-2*i*hbar*beta*x0");
    }
  CHECK(found);
}

TEST_CASE("empty parameter set gives the canonical table") {
  auto r = run("derive", json::object({{"format", "json"}}));
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  const auto& rel = j["relations"]["relations"];
  CHECK(rel.size() == 4);
  for (const auto& e : rel) {
    std::string a = e["pair"][0], b = e["pair"][1];
    CHECK(a[0] == 'p');
    CHECK(b[0] == 'x');
    CHECK(a[1] == b[1]);
    CHECK(e["value"] == (a == "p0" ? "i*hbar" : "-i*hbar"));
  }
}

TEST_CASE("zero parameters collapse every selector to the canonical table") {
  std::string canonical = json::parse(run("derive", {{"format", "json"}}).output)["relations"]["relations"].dump();
  auto same = [&](const json& cfg) {
    auto r = run("derive", cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.output)["relations"]["relations"].dump() == canonical);
  };
  same({{"preset", "iso2"}, {"parameters", {{"alpha", "0"}}}, {"format", "json"}});
  same({{"preset", "iso11"}, {"parameters", {{"beta", 0}}}, {"format", "json"}});
  same({{"case", "i"}, {"parameters", {{"delta0m", "0"}, {"delta3m", "0"}}}, {"format", "json"}});
  auto e = run("expand", {{"preset", "iso2"}, {"parameters", {{"alpha", "0"}}}, {"generator", "P1"}});
  CHECK(e.output == "D(P1) = P1 (x) 1 + 1 (x) P1\n");
}

TEST_CASE("numeric parameters are substituted after derivation") {
  auto r = run("derive", {{"preset", "iso2"}, {"parameters", {{"alpha", "1/2"}}}});
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("[x0,x1] = i*hbar*x2") != std::string::npos);
}

TEST_CASE("emitted relations parse back") {
  for (auto sel : {json{{"preset", "iso2"}}, json{{"preset", "iso11"}}, json{{"case", "i"}}, json{{"case", "ii"}}}) {
    json cfg = sel;
    cfg["format"] = "json";
    auto r = run("derive", cfg);
    REQUIRE(r.exit_code == 0);
    for (const auto& e : json::parse(r.output)["relations"]["relations"]) {
      std::string v = e["value"];
      CAPTURE(v);
      CHECK_NOTHROW(parse_phase_value(v));
    }
  }
}

TEST_CASE("check exit codes") {
  auto ok = run("check", {{"preset", "iso2"}});
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("FAIL") == std::string::npos);

  auto printed = run("check", {{"case", "ii"}, {"variant", "printed-2.5"}});
  CHECK(printed.exit_code == 1);
  CHECK(printed.output.find("residual") != std::string::npos);

  auto wrong = run("check", {{"preset", "iso2"}, {"parameters", {{"beta", "1"}}}});
  CHECK(wrong.exit_code == 2);
  CHECK(wrong.error.rfind("error: ", 0) == 0);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config({{"preset", "iso2"}, {"colour", "red"}}), ConfigError);
  CHECK_THROWS_AS(config({{"grid", {{"n", 256}, {"size", 3}}}}), ConfigError);
  CHECK_THROWS_AS(config({{"parameters", {{"gamma7", "1"}}}}), ConfigError);
  CHECK_THROWS_AS(config({{"order", "four"}}), ConfigError);
  CHECK_THROWS_AS(config({{"preset", "iso3"}}), ConfigError);
  CHECK_THROWS_AS(config({{"preset", "iso2"}, {"case", "i"}}), ConfigError);
  CHECK_THROWS_AS(config({{"grid", {{"n", 255}}}}), ConfigError);
  try {
    config({{"colour", "red"}});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
}

TEST_CASE("config round trip") {
  json j{{"preset", "iso2"},
         {"parameters", {{"alpha", "1/10"}}},
         {"order", 6},
         {"grid", {{"n", 128}, {"cutoff", 20.0}}},
         {"states", {{"count", 7}, {"seed", 99}}},
         {"scan", {{"centers", {0.0, 1.0}}, {"sigma", 0.3}}},
         {"format", "json"}};
  json once = config_to_json(config(j));
  CHECK(config_to_json(config(once)) == once);
  CHECK(once["parameters"]["alpha"] == "1/10");
  CHECK(once["states"]["seed"] == 99);
}

TEST_CASE("uncertainty iso2 report") {
  auto r = run("uncertainty", {{"preset", "iso2"}, {"parameters", {{"alpha", 0.1}}}, {"states", {{"count", 100}}},
                               {"format", "json"}});
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["suite"]["seed"] == 1);
  std::size_t lines = 0;
  for (const auto& l : j["suite"]["lines"]) {
    CHECK(l["slack"].get<double>() >= -1e-9);
    CHECK(l["commutator_residual"].get<double>() <= 1e-6);
    ++lines;
  }
  CHECK(lines == 800);
}

TEST_CASE("uncertainty iso11 scan csv is monotone") {
  auto r = run("uncertainty", {{"preset", "iso11"},
                               {"parameters", {{"beta", 1}}},
                               {"grid", {{"n", 512}}},
                               {"states", {{"count", 5}}},
                               {"scan", {{"centers", {0, 1, 2, 3, 4}}, {"sigma", 0.2}}},
                               {"format", "csv"}});
  REQUIRE(r.exit_code == 0);
  auto rows = csv_rows(r.output);
  REQUIRE(rows.size() == 6);
  CHECK(r.output.rfind("center,reference,\"rhs(p0,x0)\",", 0) == 0);
  for (std::size_t k = 2; k < rows.size(); ++k) CHECK(std::stod(rows[k][2]) > std::stod(rows[k - 1][2]));
}

TEST_CASE("zero deformation notes canonical saturation") {
  auto r = run("uncertainty", {{"preset", "iso2"}, {"parameters", {{"alpha", 0}}}, {"states", {{"count", 3}}}});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("canonical saturation") != std::string::npos);
}

TEST_CASE("grid inadequacy is reported with a hint") {
  auto r = run("uncertainty", {{"preset", "iso2"}, {"grid", {{"cutoff", 12.0}}}, {"states", {{"count", 5}}}});
  CHECK(r.exit_code == 2);
  CHECK(r.error.find("increase") != std::string::npos);
}

TEST_CASE("identical config gives identical bytes") {
  json u{{"preset", "iso11"}, {"parameters", {{"beta", 0.5}}}, {"states", {{"count", 10}, {"seed", 42}}},
         {"format", "json"}};
  CHECK(run("uncertainty", u).output == run("uncertainty", u).output);
  json d{{"case", "ii"}, {"format", "json"}};
  CHECK(run("derive", d).output == run("derive", d).output);
  json c{{"case", "ii"}, {"format", "json"}, {"variant", "printed"}};
  CHECK(run("check", c).output == run("check", c).output);
}
