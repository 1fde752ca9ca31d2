#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "llk/error.hpp"
#include "llk/report.hpp"
#include "llk/table_io.hpp"

using namespace llk;

TEST(Csv, ReadsHeaderAndBody) {
  std::istringstream in("a,b,y\n1,2.5,0\n-3,4e-2,1\n");
  auto t = read_csv(in);
  ASSERT_EQ(t.header.size(), 3u);
  EXPECT_EQ(t.body.rows, 2u);
  EXPECT_DOUBLE_EQ(t.body(1, 1), 0.04);
  EXPECT_EQ(t.column("y"), 2u);
  EXPECT_THROW(t.column("z"), DataError);
}

TEST(Csv, BadCellNamesRowAndColumn) {
  std::istringstream in("a,b\n1,2\n3,oops\n");
  try {
    read_csv(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("b"), std::string::npos) << msg;
  }
}

TEST(Csv, RaggedRowRejected) {
  std::istringstream in("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(in), DataError);
}

TEST(Csv, DatasetSplit) {
  std::istringstream in("x1,y,x2\n1,0,2\n3,1,4\n");
  auto t = read_csv(in);
  auto d = dataset_from_csv(t, "y", GlmFamily::of(Family::kBernoulli));
  EXPECT_EQ(d.num_features(), 2u);
  EXPECT_DOUBLE_EQ(d.features(1, 1), 4.0);
  EXPECT_DOUBLE_EQ(d.targets[1], 1.0);

  std::istringstream mc("x,y\n0,0\n1,2\n");
  auto dm = dataset_from_csv(read_csv(mc), "y", GlmFamily::of(Family::kMultinomial));
  EXPECT_EQ(dm.classes, 3u);
}

TEST(Csv, WriteHeaderAndRows) {
  std::ostringstream out;
  write_csv(out, {"z", "value"}, {{"1", "2"}, {"3", ""}});
  EXPECT_EQ(out.str(), "z,value\n1,2\n3,\n");
}

TEST(Model, RoundTrip) {
  Model m;
  m.family = GlmFamily::of(Family::kPoisson);
  m.features = 2;
  m.weights = Matrix(3, 1);
  m.weights.data = {0.1, -1.0 / 3.0, 2.5e-17};
  m.feature_names = {"a", "b"};
  m.target_name = "y";
  std::stringstream s;
  write_model(s, m);
  auto r = read_model(s);
  EXPECT_EQ(r.family.name, Family::kPoisson);
  EXPECT_EQ(r.family.link, Link::kLog);
  EXPECT_EQ(r.weights.data, m.weights.data);
  EXPECT_EQ(r.feature_names, m.feature_names);
  EXPECT_EQ(r.target_name, "y");
}

TEST(Model, CorruptFileRejected) {
  std::istringstream bad("llk-model 1\nfamily nope\n");
  EXPECT_ANY_THROW(read_model(bad));
  std::istringstream wrong("hello\n");
  EXPECT_THROW(read_model(wrong), DataError);
}

TEST(Report, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "Infinity");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Report, PreservesKeyOrder) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["b"] = 0.5;
  doc["a"] = 1;
  std::string text = to_report_text(doc, -1);
  EXPECT_EQ(text, R"({"schema_version":"1","b":0.5,"a":1})" "\n");
}
