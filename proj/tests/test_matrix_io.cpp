#include <gtest/gtest.h>

#include <sstream>

#include "qdlab/matrix_io.hpp"
#include "random_states.hpp"

using namespace qdlab;

TEST(MatrixJson, RoundTripIsBitExact) {
  qdlab::testing::Rng rng(41);
  const ComplexMatrix m = qdlab::testing::random_hermitian(rng, 4) / 3.0;
  std::stringstream ss;
  write_matrix_json(ss, m);
  const ComplexMatrix back = read_matrix_json(ss);
  ASSERT_EQ(back.rows(), 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_EQ(back(r, c), m(r, c));
}

TEST(MatrixJson, Layout) {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 2), Complex(3, 0), Complex(0, -4);
  const auto j = nlohmann::json::parse(matrix_to_json(m));
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["re"], (std::vector<double>{1, 0, 3, 0}));
  EXPECT_EQ(j["im"], (std::vector<double>{0, 2, 0, -4}));
}

TEST(MatrixJson, RejectsMalformed) {
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"dim":2,"re":[1,0,0],"im":[0,0,0,0]})")),
               std::invalid_argument);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"re":[1],"im":[0]})")),
               std::invalid_argument);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"dim":0,"re":[],"im":[]})")),
               std::invalid_argument);
  std::stringstream garbage("{not json");
  EXPECT_THROW(read_matrix_json(garbage), std::invalid_argument);
  EXPECT_THROW(read_matrix_json_file("/nonexistent/qdlab.json"), std::invalid_argument);
}

TEST(FormatDouble, SignificantDigitsAndNegativeZero) {
  EXPECT_EQ(format_double(0.1, 17), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0, 12), "0");
  EXPECT_EQ(format_double(1.0 / 3.0, 12), "0.333333333333");
}
