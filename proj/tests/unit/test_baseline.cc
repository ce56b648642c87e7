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

#include "ctiguard/baseline.h"
#include "ctiguard/errors.h"

using namespace ctiguard;
using namespace ctiguard::baseline;

namespace {

MaskPolicy policy(MaskMode m) {
  MaskPolicy p;
  p.mode = m;
  return p;
}

// Every byte covered by some match.
std::vector<bool> coverage(const std::string& text, MaskMode m) {
  std::vector<bool> cov(text.size(), false);
  for (const auto& x : find_matches(text, m))
    for (std::size_t i = x.start; i < x.end; ++i) cov[i] = true;
  return cov;
}

const char* kObfuscatedParagraph =
    "Data exfiltration was routed through a command-and-control (C2) server at IP addresses "
    "such as 103.98.211.42, 192(.)168(.)1(.)1, and others. These servers were associated with "
    "emails including nova(at)gmail(dot)com, john95{at}yahoo[.]com and maverik_at_dot_com. The "
    "domain safeconnectsys.net was also used, registered via addresses like "
    "liaohui.23[at]gmail.com, james23(at)hotmail(dot)com.";

}  // namespace

TEST(Mask, Examples) {
  EXPECT_EQ(mask("Contact us at john.doe@example.com for more info", policy(MaskMode::kCanonical)),
            "Contact us at <Email_Address> for more info");
  EXPECT_EQ(mask("192(.)168(.)1(.)1", policy(MaskMode::kCanonical)), "192(.)168(.)1(.)1");
  EXPECT_EQ(mask("154[.]121[.]1[.]1", policy(MaskMode::kExtended)), "<IP_Address>");
  EXPECT_EQ(mask("The server runs on port 8080 now.", policy(MaskMode::kCanonical)),
            "The server runs on port <Port> now.");
  EXPECT_EQ(mask("nothing here", policy(MaskMode::kExtended)), "nothing here");
}

TEST(Mask, PlaceholdersDiscloseKindAndPosition) {
  auto out = mask("Reach 10.0.0.1 or evil.com", policy(MaskMode::kCanonical));
  EXPECT_NE(out.find("<IP_Address>"), std::string::npos);
  EXPECT_NE(out.find("<URL>"), std::string::npos);
  EXPECT_LT(out.find("<IP_Address>"), out.find("<URL>"));
}

TEST(Mask, CanonicalMissesWhatDetectorCatches) {
  ioc::Scanner scanner;
  auto canon = mask(kObfuscatedParagraph, policy(MaskMode::kCanonical));
  auto ext = mask(kObfuscatedParagraph, policy(MaskMode::kExtended));
  EXPECT_NE(canon.find("192(.)168(.)1(.)1"), std::string::npos);
  EXPECT_NE(canon.find("john95{at}yahoo[.]com"), std::string::npos);
  EXPECT_FALSE(scanner.scan(canon).empty());
  EXPECT_TRUE(scanner.scan(ext).empty()) << ext;
}

TEST(Policy, Validation) {
  MaskPolicy p;
  EXPECT_NO_THROW(p.validate());
  p.markers[EntityKind::kPortNumber] = "<IP_Address>";
  EXPECT_THROW(p.validate(), ValidationError);
  p = MaskPolicy{};
  p.markers[EntityKind::kDomainName] = "";
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_EQ(mask_mode_from_string("extended"), MaskMode::kExtended);
  EXPECT_FALSE(mask_mode_from_string("fuzzy").has_value());
}

TEST(ResidualLeakage, Examples) {
  ioc::Scanner scanner;
  SensitiveInventory inv;
  inv.add(EntityKind::kIpAddress, "10.1.1.1");
  inv.add(EntityKind::kIpAddress, "192.168.1.1");
  inv.add(EntityKind::kEmailAddress, "a@b.com");
  std::vector<std::string> canonical = {"host 10.1.1.1 and a@b.com", "relay 192.168.1.1"};
  auto r = residual_leakage(canonical, inv, policy(MaskMode::kCanonical), scanner);
  EXPECT_DOUBLE_EQ(*r.at(EntityKind::kIpAddress).rate, 0);
  EXPECT_DOUBLE_EQ(*r.at(EntityKind::kEmailAddress).rate, 0);

  std::vector<std::string> obf = {"host 10.1.1.1 and a@b.com", "relay 192(.)168(.)1(.)1"};
  auto c = residual_leakage(obf, inv, policy(MaskMode::kCanonical), scanner);
  auto e = residual_leakage(obf, inv, policy(MaskMode::kExtended), scanner);
  EXPECT_GT(*c.at(EntityKind::kIpAddress).rate, 0);
  for (auto k : {EntityKind::kIpAddress, EntityKind::kEmailAddress})
    EXPECT_LE(*e.at(k).rate, *c.at(k).rate);
}

// Extended mode covers every byte canonical mode covers, on random mixtures
// of canonical and defanged entities.
TEST(Property, ExtendedDominatesCanonical) {
  const std::vector<std::string> pieces = {
      "10.0.0.1", "10[.]0[.]0[.]1", "a@b.com", "a[at]b[.]com", "evil.net", "evil[.]net",
      "port 443", "version 1.2.3", "x_at_y_dot_com", "(.)", "[at]", " ", ", ", "text",
      "hxxp://bad[.]org/x", "1.2.3.4:8080", "foo.bar.baz"};
  std::mt19937 rng(11);
  for (int iter = 0; iter < 3000; ++iter) {
    std::string t;
    for (std::size_t i = 0, n = 1 + rng() % 7; i < n; ++i) {
      t += pieces[rng() % pieces.size()];
      if (rng() % 3) t += " ";
    }
    auto cc = coverage(t, MaskMode::kCanonical);
    auto ce = coverage(t, MaskMode::kExtended);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (cc[i]) ASSERT_TRUE(ce[i]) << "byte " << i << " of: " << t;
    }
    auto m = find_matches(t, MaskMode::kExtended);
    for (std::size_t i = 1; i < m.size(); ++i) ASSERT_LE(m[i - 1].end, m[i].start);
  }
}
