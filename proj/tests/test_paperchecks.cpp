#include "doctest.h"
#include "qls/paperchecks.hpp"

using namespace qls;

TEST_CASE("identity suite passes and is deterministic") {
  const auto reports = check_identities(7);
  CHECK(reports.size() == 12);
  for (const auto& r : reports) {
    INFO(r.id, ": ", r.computed);
    if (!r.info_only) CHECK(r.pass);
  }
  CHECK(all_pass(reports));

  const auto again = check_identities(7, 2);
  CHECK(format_reports(reports) == format_reports(again));

  int infos = 0;
  for (const auto& r : reports) infos += r.info_only;
  CHECK(infos == 2);

  const std::string text = format_reports(reports);
  CHECK(text.find("RESULT: PASS") != std::string::npos);
  CHECK(text.find("wg-gram-identity: PASS") != std::string::npos);
  CHECK(text.find("wg-abs-sum-orthogonal-info: INFO") != std::string::npos);
}
