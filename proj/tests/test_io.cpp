#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ucenters/instances.hpp"
#include "ucenters/io.hpp"

using namespace ucenters;

namespace {

std::string error_of(const std::string& text) {
  try {
    io::parse_instance(text, "doc.json");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

const char* kTwoStatic = R"({
  "dim": 1,
  "center_kind": "one_center",
  "objects": [
    {"max_speed": 1, "waypoints": [[0, [0]]]},
    {"max_speed": 1, "waypoints": [[0, [2]]]}
  ]
})";

}  // namespace

TEST(Io, RoundTripIsExact) {
  std::vector<Instance> cases{instances::static_at_origin(4, 1.0), instances::two_movers_1d(5, 0.3),
                              instances::unbounded_1center_2d(10, 1), instances::strip_1center_2d(28, 0.7, 3.0)};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) cases.push_back(instances::random_weighted(5, seed, 3.0, 9.0, 2.5, 3));
  for (const auto& inst : cases) {
    const auto text = io::serialize_instance(inst);
    EXPECT_EQ(io::parse_instance(text), inst) << text;
    EXPECT_EQ(io::serialize_instance(io::parse_instance(text)), text);
  }
}

TEST(Io, DefaultsForOptionalFields) {
  const auto inst = io::parse_instance(kTwoStatic);
  EXPECT_EQ(inst.queries_per_step, 1u);
  EXPECT_EQ(inst.objects[0].weight, 1.0);
  EXPECT_TRUE(inst.meta.family.empty());
}

TEST(Io, SyntaxErrorCarriesLineAndColumn) {
  const std::string msg = error_of("{\n  \"dim\": 1,\n  \"center_kind\": ,\n}");
  EXPECT_EQ(msg.rfind("doc.json:3:", 0), 0u) << msg;
}

TEST(Io, StructuralErrorsNameThePointer) {
  std::string text = kTwoStatic;
  text.replace(text.find("\"max_speed\": 1"), 14, "\"max_speed\": \"x\"");
  EXPECT_NE(error_of(text).find("/objects/0/max_speed"), std::string::npos);
  text = kTwoStatic;
  text.replace(text.find("one_center"), 10, "two_center");
  EXPECT_NE(error_of(text).find("/center_kind"), std::string::npos);
  EXPECT_NE(error_of(R"({"dim": 1, "center_kind": "one_center"})").find("objects"), std::string::npos);
  EXPECT_NE(error_of("[]").find("expected an object"), std::string::npos);
}

TEST(Io, SpeedViolationRejected) {
  std::string text = kTwoStatic;
  text.replace(text.find("[[0, [2]]]"), 10, "[[0, [2]], [1, [5]]]");
  const auto msg = error_of(text);
  EXPECT_NE(msg.find("invalid instance"), std::string::npos) << msg;
}

TEST(Io, FilesAndMissingPaths) {
  const auto dir = std::filesystem::temp_directory_path() / "ucenters_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "inst.json").string();
  const auto inst = instances::median_movers(5, 1.0);
  io::save_instance(inst, path);
  EXPECT_EQ(io::load_instance(path), inst);
  EXPECT_THROW(io::load_instance((dir / "missing.json").string()), InputError);
  std::filesystem::remove_all(dir);
}

TEST(Io, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(io::format_double(3.0), "3");
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.5), "1.5");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Io, MeasurementCsv) {
  MeasurementSeries series;
  series.n = 2;
  std::ostringstream empty;
  io::write_csv(empty, series);
  EXPECT_EQ(empty.str(), "t,center_size,obj_1_size,obj_2_size\n");
  series.steps.push_back({1, 1.5, {0.0, 3.0}, {0}});
  std::ostringstream one;
  io::write_csv(one, series);
  EXPECT_EQ(one.str(), "t,center_size,obj_1_size,obj_2_size\n1,1.5,0,3\n");
}

TEST(Io, CompeteCsvAndJson) {
  std::vector<CompeteRow> rows{{8, "round_robin", 13.0, 1.0, 13.0},
                               {8, "grouped_log", 2.0, 0.0, std::numeric_limits<double>::infinity()}};
  std::ostringstream os;
  io::write_csv(os, rows);
  EXPECT_EQ(os.str(), "n,scheduler,max_size,reference_size,ratio\n8,round_robin,13,1,13\n8,grouped_log,2,0,inf\n");
  const auto doc = io::rows_json(rows);
  EXPECT_EQ(doc[0]["ratio"], 13.0);
  EXPECT_EQ(doc[1]["ratio"], "inf");
}
