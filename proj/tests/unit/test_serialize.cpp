#include "serialize_samples.hpp"

#include <coopdyn/errors.hpp>
#include <coopdyn/serialize.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace coopdyn;

namespace {

bool bitwise_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j).real() != b(i, j).real() || a(i, j).imag() != b(i, j).imag())
                return false;
    return true;
}

std::string patch(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

#ifdef COOPDYN_GOLDEN_DIR
std::string read_file(const std::string& name) {
    std::ifstream in(std::string(COOPDYN_GOLDEN_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}
#endif

} // namespace

TEST_SUITE_BEGIN("serialize");

TEST_CASE("layout round trip") {
    const SpaceLayout layout = testsamples::sample_layout();
    const std::string text = to_json(layout);
    const SpaceLayout back = layout_from_json(text);
    CHECK(back == layout);
    CHECK(back.total_dim() == layout.total_dim());
    CHECK(to_json(back) == text); // canonical form is a fixed point
    CHECK(to_json(layout) == text); // emission is deterministic
}

TEST_CASE("state round trip preserves every amplitude bit") {
    const StateVector s = testsamples::sample_state();
    const StateVector back = state_from_json(to_json(s));
    CHECK(back.layout == s.layout);
    REQUIRE(back.amplitudes.size() == s.amplitudes.size());
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
        CHECK(back.amplitudes[i].real() == s.amplitudes[i].real());
        CHECK(back.amplitudes[i].imag() == s.amplitudes[i].imag());
    }
}

TEST_CASE("operator round trip preserves structure and values") {
    const OperatorMatrix op = testsamples::sample_operator();
    const std::string text = to_json(op);
    const OperatorMatrix back = operator_from_json(text);
    CHECK(back.dim() == op.dim());
    CHECK(back.hermitian == op.hermitian);
    CHECK(bitwise_equal(Eigen::MatrixXcd(back.entries), Eigen::MatrixXcd(op.entries)));
    CHECK(to_json(back) == text);
}

TEST_CASE("system spec round trip preserves every field") {
    const SystemSpec s = testsamples::sample_full_spec();
    const SystemSpec back = spec_from_json(to_json(s));
    CHECK(back.group_a.sites == s.group_a.sites);
    CHECK(back.group_a.frequency == s.group_a.frequency);
    REQUIRE(back.group_b.has_value());
    CHECK(back.group_b->sites == s.group_b->sites);
    CHECK(back.group_b->frequency == s.group_b->frequency);
    REQUIRE(back.field_mode.has_value());
    CHECK(back.field_mode->frequency == s.field_mode->frequency);
    CHECK(back.field_mode->cutoff == s.field_mode->cutoff);
    CHECK(back.inter_coupling == s.inter_coupling);
    CHECK(back.intra_coupling_a == s.intra_coupling_a);
    CHECK(back.intra_coupling_b == s.intra_coupling_b);
    REQUIRE(back.bath_a.has_value());
    CHECK(back.bath_a->mode_frequencies == s.bath_a->mode_frequencies);
    CHECK(back.bath_a->couplings == s.bath_a->couplings);
    CHECK(back.bath_a->cutoff == s.bath_a->cutoff);
    REQUIRE(back.bath_b.has_value());
    CHECK(back.bath_b->mode_frequencies == s.bath_b->mode_frequencies);
    CHECK(back.site_offsets_a == s.site_offsets_a);
    CHECK(back.site_offsets_b == s.site_offsets_b);
    CHECK(back.rwa == s.rwa);
    CHECK(back.bath_coupling == s.bath_coupling);
    CHECK(back.bath_basis == s.bath_basis);
    CHECK(back.rng_seed == s.rng_seed);
    CHECK(back.dimension_budget == s.dimension_budget);
    CHECK(to_json(back) == to_json(s));
}

TEST_CASE("minimal spec omits the optional blocks") {
    const SystemSpec s = testsamples::sample_dicke_spec();
    const SystemSpec back = spec_from_json(to_json(s));
    CHECK_FALSE(back.group_b.has_value());
    CHECK_FALSE(back.bath_a.has_value());
    CHECK_FALSE(back.bath_b.has_value());
    CHECK(back.site_offsets_a.empty());
    CHECK(to_json(back) == to_json(s));
}

TEST_CASE("malformed documents are rejected") {
    const std::string layout_text = to_json(testsamples::sample_layout());

    SUBCASE("not JSON at all") {
        CHECK_THROWS_AS((void)layout_from_json("{nope"), ConfigError);
        CHECK_THROWS_AS((void)state_from_json(""), ConfigError);
    }
    SUBCASE("wrong kind tag") {
        CHECK_THROWS_AS((void)state_from_json(layout_text), ConfigError);
        CHECK_THROWS_AS((void)operator_from_json(layout_text), ConfigError);
        CHECK_THROWS_AS((void)spec_from_json(layout_text), ConfigError);
        CHECK_THROWS_AS((void)layout_from_json("{\"kind\":\"other\",\"schema_version\":1}"),
                        ConfigError);
    }
    SUBCASE("unsupported schema version") {
        const std::string future = patch(layout_text, "\"schema_version\":1",
                                         "\"schema_version\":2");
        CHECK_THROWS_AS((void)layout_from_json(future), ConfigError);
    }
    SUBCASE("state amplitude list must match the layout dimension") {
        std::string text = to_json(testsamples::sample_state());
        // Drop one [re,im] pair: the 8-amplitude list becomes 7 long.
        text = patch(text, "[0.0,0.0],", "");
        CHECK_THROWS_AS((void)state_from_json(text), ConfigError);
    }
    SUBCASE("state amplitudes must be [re, im] pairs") {
        std::string text = to_json(testsamples::sample_state());
        text = patch(text, "[0.0,0.0]", "[0.0]");
        CHECK_THROWS_AS((void)state_from_json(text), ConfigError);
    }
    SUBCASE("operator triplets are range checked") {
        const std::string good = to_json(testsamples::sample_operator());
        const std::string bad_index = patch(good, "\"triplets\":[[0,", "\"triplets\":[[999,");
        CHECK_THROWS_AS((void)operator_from_json(bad_index), ConfigError);
    }
    SUBCASE("spec enums reject unknown strings") {
        const std::string good = to_json(testsamples::sample_full_spec());
        CHECK_THROWS_AS(
            (void)spec_from_json(patch(good, "\"excitation_conserving\"", "\"dipole\"")),
            ConfigError);
        CHECK_THROWS_AS((void)spec_from_json(patch(good, "\"bath_basis\":\"local\"",
                                                   "\"bath_basis\":\"chiral\"")),
                        ConfigError);
    }
    SUBCASE("spec validation runs on ingest") {
        const std::string good = to_json(testsamples::sample_full_spec());
        // Bath B exists but group B is removed: shapes no longer line up.
        const std::string orphan = patch(good, "\"group_b\":{\"frequency\":1.25,\"sites\":2}",
                                         "\"group_b\":null");
        CHECK_THROWS_AS((void)spec_from_json(orphan), ConfigError);
    }
}

TEST_CASE("format_double emits shortest round-trip text") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(42.0) == "42");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.25) == "-0.25");

    // Round-trip exactness over a deterministic spread of magnitudes.
    std::uint64_t x = 0x9E3779B97F4A7C15ull;
    for (int i = 0; i < 2000; ++i) {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        const double mant = double(x >> 11) / double(1ull << 53);
        const double v = (i % 2 ? -1.0 : 1.0) * std::ldexp(0.5 + mant, (i % 613) - 306);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(std::stod(format_double(1e-300)) == 1e-300);
    CHECK(std::stod(format_double(9.87e307)) == 9.87e307);
}

TEST_CASE("CSV assembly") {
    SUBCASE("exact layout of a small table") {
        CsvTable t({"a", "b"});
        t.add_row({CsvTable::cell(1), CsvTable::cell(0.5)});
        t.add_row({CsvTable::cell(std::size_t(7)), CsvTable::cell(-2.0)});
        CHECK(t.str() == "a,b\n1,0.5\n7,-2\n");
    }
    SUBCASE("row width is enforced") {
        CsvTable t({"a", "b"});
        CHECK_THROWS_AS(t.add_row({"only-one"}), ConfigError);
        CHECK_THROWS_AS(CsvTable({}), ConfigError);
    }
    SUBCASE("propagation export: time column plus tracked columns") {
        const std::string csv = to_csv(testsamples::sample_propagation());
        std::istringstream lines(csv);
        std::string line;
        REQUIRE(std::getline(lines, line));
        CHECK(line == "time,overlap_sq,energy");
        int rows = 0;
        while (std::getline(lines, line)) ++rows;
        CHECK(rows == 3);
        CHECK(csv.find("0.25,") != std::string::npos);
    }
    SUBCASE("scaling report export") {
        const std::string csv = to_csv(testsamples::sample_report());
        std::istringstream lines(csv);
        std::string line;
        REQUIRE(std::getline(lines, line));
        CHECK(line == "N,n,M,m,predicted,measured,abs_error");
        int rows = 0;
        while (std::getline(lines, line)) ++rows;
        CHECK(rows == 9);
    }
}

#ifdef COOPDYN_GOLDEN_DIR
TEST_CASE("golden files are byte-stable") {
    CHECK(to_json(testsamples::sample_layout()) == read_file("layout.json"));
    CHECK(to_json(testsamples::sample_state()) == read_file("state.json"));
    CHECK(to_json(testsamples::sample_operator()) == read_file("operator.json"));
    CHECK(to_json(testsamples::sample_full_spec()) == read_file("spec.json"));
    CHECK(to_csv(testsamples::sample_report()) == read_file("scaling.csv"));
    CHECK(to_csv(testsamples::sample_propagation()) == read_file("propagation.csv"));
}
#endif

TEST_SUITE_END();
