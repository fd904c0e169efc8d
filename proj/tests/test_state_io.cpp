#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "entbound/state_io.hpp"

using namespace entbound;
using nlohmann::json;

TEST(StateIo, ReadsDocumentedFormat) {
  const auto doc = json::parse(R"({
    "dims": [2, 2, 2],
    "amplitudes": [
      {"index": [0, 0, 0], "re": 0.7071067811865476, "im": 0.0},
      {"index": [1, 1, 1], "re": 0.0, "im": 0.7071067811865476}
    ]})");
  const auto s = state_from_json(doc);
  EXPECT_EQ(s.dims(), (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(s.amplitude({1, 1, 1}), cplx(0.0, 0.7071067811865476));
  EXPECT_EQ(s.amplitude({0, 1, 0}), cplx{});
  EXPECT_TRUE(s.normalized());
}

TEST(StateIo, RejectsMalformedDocuments) {
  EXPECT_THROW(state_from_json(json::parse("[]")), malformed_file);
  EXPECT_THROW(state_from_json(json::parse(R"({"amplitudes": []})")), malformed_file);
  EXPECT_THROW(state_from_json(json::parse(R"({"dims": [2, -1], "amplitudes": []})")),
               malformed_file);
  EXPECT_THROW(state_from_json(json::parse(
                   R"({"dims": [2], "amplitudes": [{"index": [2], "re": 1.0, "im": 0.0}]})")),
               malformed_file);
  EXPECT_THROW(state_from_json(json::parse(
                   R"({"dims": [2], "amplitudes": [{"index": [0, 0], "re": 1.0}]})")),
               malformed_file);
  EXPECT_THROW(state_from_json(json::parse(R"({"dims": [2], "amplitudes": [
                   {"index": [0], "re": 1.0}, {"index": [0], "re": 0.0}]})")),
               malformed_file);
  EXPECT_THROW(state_from_json(json::parse(
                   R"({"dims": [2], "amplitudes": [{"index": [0], "re": 0.5, "im": 0.0}]})")),
               not_normalized);
  EXPECT_THROW(read_state_file("/nonexistent/state.json"), malformed_file);
}

TEST(StateIo, FileRoundTripPreservesAmplitudesExactly) {
  const auto dir = std::filesystem::temp_directory_path();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto psi = random_state({2, 3, 2}, seed);
    const auto path = (dir / ("entbound_io_" + std::to_string(seed) + ".json")).string();
    write_state_file(psi, path);
    const auto back = read_state_file(path);
    std::remove(path.c_str());
    ASSERT_EQ(back.dims(), psi.dims());
    for (Index i = 0; i < psi.size(); ++i) EXPECT_EQ(back.amplitude(i), psi.amplitude(i));
  }
}
