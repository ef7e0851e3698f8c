#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "opuc/schur.hpp"
#include "test_util.hpp"

using namespace opuc;

TEST(Validate, PositiveSequence) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.definiteness(), Definiteness::positive);
  EXPECT_EQ(s.a(0), cplx(1.0));
}

TEST(Validate, QuasiSequenceFlipsSign) {
  const auto s = SchurSequence::validate({2.0});
  EXPECT_EQ(s.definiteness(), Definiteness::quasi);
  EXPECT_EQ(s.eps(1), -1);
  EXPECT_EQ(s.e(1), -1);
}

TEST(Validate, RejectsUnitModulus) {
  try {
    SchurSequence::validate({0.3, std::polar(1.0, 0.7)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnitModulusParameter);
    EXPECT_EQ(e.index(), 2);
  }
  EXPECT_THROW(SchurSequence::validate({1.0 + 5e-13}), Error);
  EXPECT_NO_THROW(SchurSequence::validate({1.0 + 1e-9}));
}

TEST(Validate, ModeAndEmpty) {
  EXPECT_THROW(SchurSequence::validate({0.5, 1.5}, Mode::positive), Error);
  EXPECT_NO_THROW(SchurSequence::validate({0.5, 1.5}, Mode::quasi));
  EXPECT_THROW(SchurSequence::validate(std::vector<cplx>{}), Error);
  EXPECT_THROW(SchurSequence::validate({cplx(NAN, 0)}), Error);
}

TEST(Derived, HandValues) {
  const auto s = SchurSequence::validate({0.5});
  EXPECT_NEAR(s.rho(1), 0.8660254037844386, 1e-15);
  EXPECT_EQ(s.eps(1), 1);
  EXPECT_NEAR(s.kappa(1), 1.1547005383792515, 1e-15);

  const auto q = SchurSequence::validate({2.0});
  EXPECT_NEAR(q.rho(1), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(q.rhohat(1), -std::sqrt(3.0), 1e-15);

  const auto f = SchurSequence::validate({0.0});
  EXPECT_EQ(f.rho(1), 1.0);
  EXPECT_EQ(f.kappa(1), 1.0);
  EXPECT_EQ(f.e(1), 1);
}

TEST(Derived, IndexChecks) {
  const auto s = SchurSequence::validate({0.5, 0.2});
  EXPECT_THROW(s.a(3), Error);
  EXPECT_THROW(s.rho(0), Error);
  EXPECT_NO_THROW(s.kappa(0));
}

TEST(Derived, PropertiesOnRandomSequences) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto s = t % 2 ? fixture::quasi(rng, 12) : fixture::positive(rng, 12);
    double prod = 1.0;
    int e = 1;
    for (int k = 1; k <= s.size(); ++k) {
      const double gap = std::abs(1.0 - std::norm(s.a(k)));
      EXPECT_NEAR(s.rho(k) * s.rho(k), gap, 1e-14 * gap);
      EXPECT_TRUE(s.eps(k) == 1 || s.eps(k) == -1);
      EXPECT_EQ(s.rhohat(k), s.eps(k) * s.rho(k));
      prod *= s.rho(k);
      e *= s.eps(k);
      EXPECT_EQ(s.e(k), e);
      EXPECT_NEAR(s.kappa(k) * prod, 1.0, 1e-13);
      if (s.definiteness() == Definiteness::positive) {
        EXPECT_EQ(s.e(k), 1);
        EXPECT_GE(s.kappa(k), s.kappa(k - 1));
      }
    }
  }
}

TEST(Sequence, TruncateReplaceExtend) {
  const auto s = SchurSequence::validate({0.1, 0.2, 0.3});
  EXPECT_EQ(s.truncated(2).size(), 2);
  EXPECT_THROW(s.truncated(4), Error);
  EXPECT_EQ(s.with_param(2, 3.0).definiteness(), Definiteness::quasi);
  EXPECT_EQ(s.extended(0.4).a(4), cplx(0.4));
}

TEST(Generate, ConstantAndRandom) {
  const auto c = generate(ConstantGen{0.5}, 3);
  ASSERT_EQ(c.size(), 3);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(c.a(k), cplx(0.5));

  const auto r1 = generate(DiskRandomGen{0.2, 0.8, 7}, 4);
  const auto r2 = generate(DiskRandomGen{0.2, 0.8, 7}, 4);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(r1.a(k), r2.a(k));
    EXPECT_GE(std::abs(r1.a(k)), 0.2 - 1e-15);
    EXPECT_LE(std::abs(r1.a(k)), 0.8 + 1e-15);
  }
  EXPECT_THROW(generate(DiskRandomGen{0.5, 1.5, 1}, 4), Error);
  EXPECT_THROW(generate(ConstantGen{0.5}, 0), Error);
}

TEST(Json, BitExactRoundTrip) {
  std::mt19937_64 rng(3);
  const auto s = fixture::quasi(rng, 9);
  const auto back = parse_sequence_json(to_json(s).dump());
  for (int k = 1; k <= 9; ++k) EXPECT_EQ(back.a(k), s.a(k));

  const auto path = std::filesystem::temp_directory_path() / "opuc_schur_roundtrip.json";
  write_sequence_file(s, path);
  const auto f = generate(FileGen{path}, 5);
  EXPECT_EQ(f.size(), 5);
  EXPECT_EQ(f.a(5), s.a(5));
  EXPECT_THROW(generate(FileGen{path}, 10), Error);
  std::filesystem::remove(path);
}

TEST(Json, MalformedReportsLineAndColumn) {
  try {
    parse_sequence_json("{\n  \"params\": [[0.5, 0]\n", "f.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
    EXPECT_NE(std::string(e.what()).find("f.json:"), std::string::npos);
  }
  EXPECT_THROW(parse_sequence_json("{\"params\": [[0.5]]}"), Error);
  EXPECT_THROW(parse_sequence_json("{\"mode\": \"bogus\", \"params\": [[0.5, 0]]}"), Error);
  EXPECT_THROW(read_sequence_file("/nonexistent/opuc.json"), Error);
}

TEST(Json, ModeIsHonoured) {
  EXPECT_THROW(parse_sequence_json(R"({"mode": "positive", "params": [[1.5, 0]]})"), Error);
  EXPECT_EQ(parse_sequence_json(R"({"mode": "quasi", "params": [[1.5, 0]]})").mode(), Mode::quasi);
}
