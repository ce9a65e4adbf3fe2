#include <doctest.h>

#include <set>

#include "affdim/acceptance.hpp"
#include "affdim/gallery.hpp"
#include "affdim/system_io.hpp"

using namespace affdim;

TEST_CASE("gallery contents") {
  const auto all = gallery_list();
  CHECK(all.size() >= 6);
  std::set<std::string> names;
  for (const auto& g : all) {
    names.insert(g.name);
    CHECK_FALSE(g.description.empty());
    CHECK_FALSE(g.known_values.empty());
    for (const auto& k : g.known_values) {
      CHECK_FALSE(k.provenance.empty());
      CHECK_FALSE(k.expression.empty());
    }
    CHECK(gallery_get(g.name).system.size() == g.system.size());
  }
  CHECK(names.size() == all.size());
  for (const char* surrogate : {"pu-surrogate", "ss-esc-N9", "phi-lambda-mixed"})
    CHECK_FALSE(gallery_get(surrogate).caveats.empty());
  CHECK_THROWS_AS(gallery_get("no-such-system"), DomainError);
  CHECK_THROWS_AS(gallery_get("cantor-third").known("dimQ"), DomainError);
  CHECK(gallery_get("cantor-third").known("dimB") == doctest::Approx(0.6309297535714574));
}

TEST_CASE("acceptance report with zero tolerance fails by name") {
  AcceptanceOptions options;
  options.tolerance_scale = 0;
  options.only = {3};
  const auto report = run_acceptance(options);
  REQUIRE(report.results.size() == 1);
  CHECK(report.results[0].id == 3);
  CHECK_FALSE(report.results[0].passed);
  CHECK_FALSE(report.all_passed());
  const auto text = format_report(report);
  CHECK(text.find("[FAIL] 3 ") != std::string::npos);
}

TEST_CASE("acceptance JSON fields") {
  AcceptanceOptions options;
  options.only = {1, 2};
  const auto report = run_acceptance(options);
  REQUIRE(report.results.size() == 2);
  CHECK(report.all_passed());
  const auto json = to_json(report);
  REQUIRE(json.contains("criteria"));
  for (const auto& c : json["criteria"]) {
    for (const char* key : {"id", "name", "passed", "measured", "target", "tolerance", "seconds", "detail"})
      CHECK(c.contains(key));
  }
}
