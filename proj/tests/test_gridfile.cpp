#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "diskharm/gridfile.hpp"
#include "diskharm/transforms.hpp"
#include "test_support.hpp"

using namespace diskharm;

namespace {

Field sample_field() {
    const auto f = std::get<QCase>(figure_case(15).payload).source;
    return q_transform(f, EvaluationGrid::uniform(0.9, 4, 8), 1.0);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST(GridFile, RoundTripIsBitwise) {
    const auto dir = testsupport::scratch_dir();
    Field f = sample_field();
    f.values[3] = 1.0 / 3.0;
    f.values[5] = -1e-300;
    f.converged[7] = 0;
    const auto path = (dir / "field.csv").string();
    EXPECT_EQ(write_and_verify(path, f), 0.0);
    const Field back = read_grid(path);
    EXPECT_EQ(back.values, f.values);
    EXPECT_EQ(back.converged, f.converged);
    EXPECT_EQ(back.grid.radii, f.grid.radii);
    EXPECT_EQ(back.grid.angles, f.grid.angles);
    EXPECT_EQ(back.meta.operator_name, "q_transform");
    EXPECT_EQ(back.meta.source_description, f.meta.source_description);
    EXPECT_EQ(back.meta.prefactor, 1.0);
}

TEST(GridFile, NonFiniteValuesSurviveTheRoundTrip) {
    const auto dir = testsupport::scratch_dir();
    Field f = sample_field();
    f.values[0] = NAN;
    f.converged[0] = 0;
    const auto path = (dir / "nan.csv").string();
    write_grid(path, f);
    const Field back = read_grid(path);
    EXPECT_TRUE(std::isnan(back.values[0]));
    EXPECT_EQ(back.converged[0], 0);
}

TEST(GridFile, WritingIsDeterministic) {
    const auto dir = testsupport::scratch_dir();
    const Field f = sample_field();
    write_grid((dir / "a.csv").string(), f);
    write_grid((dir / "b.csv").string(), f);
    EXPECT_EQ(read_text((dir / "a.csv").string()), read_text((dir / "b.csv").string()));
    EXPECT_EQ(read_text((dir / "a.csv.meta.json").string()), read_text((dir / "b.csv.meta.json").string()));
}

TEST(GridFile, SidecarContents) {
    const Field f = sample_field();
    const auto j = sidecar_json(f);
    EXPECT_EQ(j["artifact_version"], kArtifactVersion);
    EXPECT_EQ(j["operator"], "q_transform");
    EXPECT_EQ(j["grid"]["n_r"], 4);
    EXPECT_EQ(j["grid"]["n_theta"], 8);
    EXPECT_EQ(j["grid"]["r_max"], 0.9);
    EXPECT_TRUE(j["all_converged"].get<bool>());
    EXPECT_FALSE(j.contains("timestamp"));
    EXPECT_TRUE(j["quadrature"]["singularity_exponent"].is_null());
    EXPECT_TRUE(sidecar_json(f, {true}).contains("timestamp"));
}

TEST(GridFile, CsvLayout) {
    const std::string csv = grid_csv(sample_field());
    EXPECT_EQ(csv.rfind(std::string(kGridHeader) + "\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 8);
    EXPECT_NE(csv.find("\n0,-3.1415926535897931,"), std::string::npos);
}

TEST(GridFile, MalformedFilesNameTheLine) {
    const auto dir = testsupport::scratch_dir();
    const auto path = dir / "bad.csv";
    write_file(path, "x,y\n");
    EXPECT_THROW(read_grid(path.string()), ParseError);
    write_file(path, std::string(kGridHeader) + "\n0,0,1,1\n0,1,abc,1\n");
    try {
        (void)read_grid(path.string());
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(e.where().find("line 3"), std::string::npos) << e.where();
    }
    write_file(path, std::string(kGridHeader) + "\n0,0,1,2\n");
    EXPECT_THROW(read_grid(path.string()), ParseError);
    write_file(path, std::string(kGridHeader) + "\n0,0,1\n");
    EXPECT_THROW(read_grid(path.string()), ParseError);
    write_file(path, std::string(kGridHeader) + "\n");
    EXPECT_THROW(read_grid(path.string()), ParseError);
    // not a tensor grid
    write_file(path, std::string(kGridHeader) + "\n0,0,1,1\n0,1,1,1\n0.5,0,1,1\n0.5,2,1,1\n");
    EXPECT_THROW(read_grid(path.string()), ParseError);
    EXPECT_THROW(read_grid((dir / "missing.csv").string()), std::runtime_error);
}

TEST(GridFile, DifferenceDetectsMismatches) {
    const Field a = sample_field();
    Field b = a;
    EXPECT_EQ(max_field_difference(a, b), 0.0);
    b.values[2] += 1e-3;
    EXPECT_NEAR(max_field_difference(a, b), 1e-3, 1e-15);
    b = a;
    b.converged[1] = 0;
    EXPECT_EQ(max_field_difference(a, b), INFINITY);
    const Field c = q_transform(characteristic_disk(0.5), EvaluationGrid::uniform(0.9, 3, 8), 1.0);
    EXPECT_EQ(max_field_difference(a, c), INFINITY);
}

TEST(GridFile, KernelProfileCsv) {
    const std::string csv = profiles_csv({0.0, 1.0}, {0.5, 0.75}, {{3.0, 1.0}, {7.0, 2.0}});
    EXPECT_EQ(csv, "theta,r=0.5,r=0.75\n0,3,7\n1,1,2\n");
}
