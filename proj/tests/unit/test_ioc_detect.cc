// Copyright 2026 The ctiguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "ctiguard/errors.h"
#include "ctiguard/ioc_detect.h"

using namespace ctiguard;

namespace {

const ioc::Scanner& scanner() {
  static const ioc::Scanner s;
  return s;
}

std::vector<EntitySpan> scan(const std::string& t) { return scanner().scan(t); }

void expect_single(const std::string& text, EntityKind kind, const std::string& raw,
                   const std::string& normalized) {
  auto spans = scan(text);
  ASSERT_EQ(spans.size(), 1u) << text;
  EXPECT_EQ(spans[0].kind, kind) << text;
  EXPECT_EQ(spans[0].raw, raw) << text;
  EXPECT_EQ(spans[0].normalized, normalized) << text;
  EXPECT_EQ(text.substr(spans[0].start, spans[0].end - spans[0].start), raw);
}

void check_well_formed(const std::string& text, const std::vector<EntitySpan>& spans) {
  std::size_t last_end = 0;
  for (const auto& s : spans) {
    ASSERT_LT(s.start, s.end) << text;
    ASSERT_LE(s.end, text.size()) << text;
    ASSERT_GE(s.start, last_end) << "overlap or disorder in: " << text;
    EXPECT_EQ(text.substr(s.start, s.end - s.start), s.raw);
    EXPECT_FALSE(s.normalized.empty());
    EXPECT_EQ(scanner().normalize(s.normalized, s.kind), s.normalized) << "not idempotent";
    last_end = s.end;
  }
}

}  // namespace

TEST(Scan, BracketedIp) {
  expect_single("The server is reachable at 154[.]121[.]1[.]1 through the internal VPN.",
                EntityKind::kIpAddress, "154[.]121[.]1[.]1", "154.121.1.1");
}

TEST(Scan, BracketedAtEmail) {
  expect_single("Please contact the admin at test[at]gmail.com for assistance.",
                EntityKind::kEmailAddress, "test[at]gmail.com", "test@gmail.com");
}

TEST(Scan, TwoVersions) {
  auto spans = scan("Adobe Software versions before 10.2.3 and after 10.2.5");
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].kind, EntityKind::kSoftwareVersion);
  EXPECT_EQ(spans[0].normalized, "10.2.3");
  EXPECT_EQ(spans[1].kind, EntityKind::kSoftwareVersion);
  EXPECT_EQ(spans[1].normalized, "10.2.5");
}

TEST(Scan, ParenDots) {
  expect_single("192(.)168(.)1(.)1", EntityKind::kIpAddress, "192(.)168(.)1(.)1", "192.168.1.1");
}

TEST(Scan, NothingToFind) { EXPECT_TRUE(scan("no indicators here").empty()); }

TEST(Scan, MixedDefangWithinOneEntity) {
  expect_single("seen at 10.0[.]0(.)7 today", EntityKind::kIpAddress, "10.0[.]0(.)7", "10.0.0.7");
  expect_single("mail james23(at)hotmail(dot)com now", EntityKind::kEmailAddress,
                "james23(at)hotmail(dot)com", "james23@hotmail.com");
  expect_single("write to ops_at_corp_dot_com please", EntityKind::kEmailAddress,
                "ops_at_corp_dot_com", "ops@corp.com");
}

TEST(Scan, PortNeedsCue) {
  expect_single("The server runs on port 8080 and can be accessed.", EntityKind::kPortNumber,
                "8080", "8080");
  EXPECT_TRUE(scan("We counted 8080 samples.").empty());
  auto spans = scan("beacon to 10.1.2.3:4444 every minute");
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].kind, EntityKind::kIpAddress);
  EXPECT_EQ(spans[1].kind, EntityKind::kPortNumber);
  EXPECT_EQ(spans[1].normalized, "4444");
}

TEST(Scan, VersionNeedsCue) {
  EXPECT_TRUE(scan("The ratio was 3.14 overall.").empty());
  auto spans = scan("Apache Struts version 2.3.31 is affected");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].kind, EntityKind::kSoftwareVersion);
}

TEST(Scan, DomainsAndUrls) {
  expect_single("Access the admin panel at admin.example.com to configure the settings.",
                EntityKind::kDomainName, "admin.example.com", "admin.example.com");
  expect_single("Visit http://example.com/download to get the latest update.",
                EntityKind::kDomainName, "http://example.com/download", "example.com");
  expect_single("C2 at Evil-Domain[.]NET was seen", EntityKind::kDomainName, "Evil-Domain[.]NET",
                "evil-domain.net");
}

TEST(Normalize, Examples) {
  EXPECT_EQ(scanner().normalize("john95{at}yahoo[.]com", EntityKind::kEmailAddress),
            "john95@yahoo.com");
  EXPECT_EQ(scanner().normalize("192.168.1.1", EntityKind::kIpAddress), "192.168.1.1");
  EXPECT_THROW(scanner().normalize("999.1.1.1", EntityKind::kIpAddress), NormalizationError);
  try {
    scanner().normalize("999.1.1.1", EntityKind::kIpAddress);
  } catch (const NormalizationError& e) {
    EXPECT_NE(std::string(e.what()).find("octet"), std::string::npos) << e.what();
  }
}

TEST(Normalize, OctetBoundExhaustive) {
  for (int v = 0; v <= 999; ++v) {
    std::string ip = "10.1." + std::to_string(v) + ".1";
    if (v <= 255) {
      EXPECT_EQ(scanner().normalize(ip, EntityKind::kIpAddress), ip);
    } else {
      EXPECT_THROW(scanner().normalize(ip, EntityKind::kIpAddress), NormalizationError) << ip;
    }
  }
}

TEST(Normalize, PortRangeAndVersionShape) {
  EXPECT_EQ(scanner().normalize("65535", EntityKind::kPortNumber), "65535");
  EXPECT_THROW(scanner().normalize("65536", EntityKind::kPortNumber), NormalizationError);
  EXPECT_THROW(scanner().normalize("10.x.3", EntityKind::kSoftwareVersion), NormalizationError);
  EXPECT_THROW(scanner().normalize("not-an-email", EntityKind::kEmailAddress), NormalizationError);
}

TEST(Refang, CanonicalTextIsFixedPoint) {
  const auto& cat = scanner().catalog();
  for (const char* t : {"plain 1.2.3.4 and a@b.com", "version 10.2.3 on port 80",
                        "nothing here at all", "under_score words_and_things"}) {
    auto r = ioc::refang(t, cat);
    EXPECT_EQ(r.text, t);
    EXPECT_FALSE(r.any_rewritten(0, r.text.size()));
  }
}

TEST(Refang, EveryRuleMapsToItsReplacement) {
  for (const auto& rule : scanner().catalog().rules()) {
    if (rule.style != ioc::RuleStyle::kLiteral) continue;
    auto r = ioc::refang("x" + rule.pattern + "y", scanner().catalog());
    EXPECT_EQ(r.text, "x" + rule.replacement + "y") << rule.pattern_class;
  }
}

TEST(Catalog, JsonExtensionAddsRulesAndTlds) {
  auto cat = ioc::RuleCatalog::from_json(
      R"({"rules":[{"class":"angle-dot","pattern":"<.>","replacement":"."}],"tlds":["zz"]})");
  ioc::Scanner s(cat);
  auto spans = s.scan("host at 10<.>2<.>3<.>4 and evil.zz");
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].normalized, "10.2.3.4");
  EXPECT_EQ(spans[1].normalized, "evil.zz");
  EXPECT_TRUE(scanner().scan("evil.zz").empty());
}

TEST(TrailingPartial, CompletionBait) {
  auto p = scanner().trailing_partial("Lazurus campaigns used 154.198.");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->kind, EntityKind::kIpAddress);
  p = scanner().trailing_partial("Some malware uses shash@.");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->kind, EntityKind::kEmailAddress);
  EXPECT_FALSE(scanner().trailing_partial("Attackers were successful in launching a cyber campaign."));
  EXPECT_FALSE(scanner().trailing_partial("The host was 10.1.2.3."));
}

// Round trip: every catalog obfuscation of a canonical entity normalizes back.
TEST(Property, DefangRoundTrip) {
  std::mt19937 rng(1234);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  const std::vector<std::string> dots = {".", "[.]", "(.)", "{.}"};
  const std::vector<std::string> ats = {"@", "[at]", "(at)", "{at}"};
  const std::vector<std::string> email_dots = {".", "[.]", "(dot)", "{.}", "(.)"};
  const std::vector<std::string> tlds = {"com", "net", "org", "ru", "io"};
  for (int iter = 0; iter < 2000; ++iter) {
    int o[4];
    for (int& x : o) x = pick(256);
    std::string ip = std::to_string(o[0]) + "." + std::to_string(o[1]) + "." +
                     std::to_string(o[2]) + "." + std::to_string(o[3]);
    std::string ip_obf = std::to_string(o[0]);
    for (int i = 1; i < 4; ++i) ip_obf += dots[pick(4)] + std::to_string(o[i]);
    EXPECT_EQ(scanner().normalize(ip_obf, EntityKind::kIpAddress), ip) << ip_obf;
    expect_single("Traffic went to " + ip_obf + " overnight.", EntityKind::kIpAddress, ip_obf, ip);

    std::string user = "u" + std::to_string(pick(100000));
    std::string host = "h" + std::to_string(pick(1000)) + "mail";
    std::string tld = tlds[pick(5)];
    std::string email = user + "@" + host + "." + tld;
    std::string email_obf;
    if (pick(4) == 0) {
      email_obf = user + "_at_" + host + (pick(2) ? "_dot_" : ".") + tld;
    } else {
      email_obf = user + ats[pick(4)] + host + email_dots[pick(5)] + tld;
    }
    EXPECT_EQ(scanner().normalize(email_obf, EntityKind::kEmailAddress), email) << email_obf;
    expect_single("Contact " + email_obf + " for keys.", EntityKind::kEmailAddress, email_obf,
                  email);

    std::string dom = "d" + std::to_string(pick(10000)) + "-ops." + tld;
    std::string dom_obf = dom.substr(0, dom.rfind('.')) + dots[pick(4)] + tld;
    EXPECT_EQ(scanner().normalize(dom_obf, EntityKind::kDomainName), dom) << dom_obf;
  }
}

TEST(Property, ScanOutputWellFormedOnRandomConcatenations) {
  const std::vector<std::string> pieces = {
      "The actor used 45[.]76[.]89[.]10 as a relay.",
      "Mail went to nova(at)gmail(dot)com and ",
      "the beacon hit 10.0.0.1:443",
      " on port 22, ",
      "Adobe Reader version 11.0.2 was targeted.",
      "domain safeconnectsys.net, ",
      "liaohui.23[at]gmail.com",
      "hxxp://bad[.]example[.]org/payload",
      " and ",
      "(",
      ")",
      "[.]",
      "...",
      "plain words only",
      "218[.]65[.]128[.]201",
      "user_at_host_dot_com",
      "3.14",
      "port",
      "test{at}mail.org",
      "v2.1",
      "ports 80, 443 and 8080",
      "https://10.1.2.3:8443/x",
      "john95{at}yahoo[.]com",
      "_at_",
      "@",
      ":",
      ",",
      "admin.example.com",
  };
  std::mt19937 rng(99);
  for (int iter = 0; iter < 20000; ++iter) {
    std::string text;
    int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      text += pieces[rng() % pieces.size()];
      if (rng() % 2) text += " ";
    }
    auto spans = scan(text);
    check_well_formed(text, spans);
    auto once = ioc::elide_spans(text, spans);
    EXPECT_TRUE(scan(once).empty()) << "input: " << text << "\nelided: " << once;
    EXPECT_TRUE(scan(ioc::elide_all(scanner(), text)).empty()) << text;
  }
}

TEST(Elide, Examples) {
  std::string t = "The server is reachable at 154[.]121[.]1[.]1 through the internal VPN.";
  EXPECT_EQ(ioc::elide_spans(t, scan(t)), "The server is reachable through the internal VPN.");
  std::string plain = "Nothing  sensitive here.";
  EXPECT_EQ(ioc::elide_spans(plain, scan(plain)), plain);
  std::string list = "emails a@x.com, b@y.com and c@z.com";
  auto out = ioc::elide_spans(list, scan(list));
  EXPECT_TRUE(scan(out).empty()) << out;
  EXPECT_EQ(out.find("  "), std::string::npos) << out;
  EXPECT_EQ(out.find(" ,"), std::string::npos) << out;
}

TEST(Elide, AllCollectsRemovedSpans) {
  std::vector<EntitySpan> removed;
  auto out = ioc::elide_all(scanner(), "Use 1.2.3.4 or evil.com via port 8443.", &removed);
  EXPECT_TRUE(scan(out).empty());
  EXPECT_EQ(removed.size(), 3u);
}
