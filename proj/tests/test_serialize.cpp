#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "hkc/random.hpp"
#include "hkc/serialize.hpp"

using namespace hkc;

namespace {
const SeedRng rng(555);
}

TEST_CASE("binary container round trip is bit exact") {
    TorusGrid g(8);
    auto st = rng.stream("bin");
    Form f = random_form(g, 2, 2, 3, st);
    std::stringstream ss;
    write_form(ss, f);
    Form back = read_form(ss);
    CHECK(back.grid().n == 8);
    CHECK(back.degree() == 2);
    CHECK(back.rank() == 2);
    CHECK(back.band() == 3);
    REQUIRE(back.raw().size() == f.raw().size());
    for (std::size_t i = 0; i < f.raw().size(); ++i) CHECK(back.raw()[i] == f.raw()[i]);
}

TEST_CASE("binary header layout is as documented") {
    TorusGrid g(8);
    Form f(g, 0, 1, 0);
    f.plane(0, 0, 0)[0] = cplx(1.5, -2.5);
    std::stringstream ss;
    write_form(ss, f);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 4 + 4 * 4 + f.raw().size() * 16);
    CHECK(bytes.substr(0, 4) == "HKF1");
    auto u32 = [&](std::size_t off) {
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + off, 4);
        return v;
    };
    CHECK(u32(4) == 8);    // N
    CHECK(u32(8) == 0);    // degree
    CHECK(u32(12) == 1);   // rank
    double re, im;
    std::memcpy(&re, bytes.data() + 20, 8);
    std::memcpy(&im, bytes.data() + 28, 8);
    CHECK(re == 1.5);
    CHECK(im == -2.5);
}

TEST_CASE("truncated or corrupt binary input is rejected") {
    TorusGrid g(8);
    Form f(g, 1, 1, 0);
    std::stringstream ss;
    write_form(ss, f);
    std::string bytes = ss.str();
    {
        std::stringstream bad(bytes.substr(0, bytes.size() / 2));
        CHECK_THROWS_AS(read_form(bad), std::runtime_error);
    }
    {
        bytes[0] = 'X';
        std::stringstream bad(bytes);
        CHECK_THROWS_AS(read_form(bad), std::runtime_error);
    }
}

TEST_CASE("json round trip reproduces coefficients exactly") {
    TorusGrid g(8);
    auto st = rng.stream("json");
    Form f = random_form(g, 1, 2, 2, st);
    nlohmann::json j = form_to_json(f);
    CHECK(j["schema"] == "hk-calculus/form/1");
    Form back = form_from_json(j);
    // nlohmann serializes doubles with round-trip precision
    Form diff = back;
    diff -= f;
    CHECK(l2_norm(diff) == 0.0);
    j["data"].erase(j["data"].size() - 1);
    CHECK_THROWS_AS(form_from_json(j), std::runtime_error);
}

TEST_CASE("hyperkahler structure serializes row major with both omegas") {
    HKStructure hk;
    nlohmann::json j = hk_structure_to_json(hk);
    CHECK(j["I"].size() == 16);
    // I e0 = e1: row-major entry (1,0) is +1
    CHECK(j["I"][4].get<double>() == 1.0);
    CHECK(j["I"][1].get<double>() == -1.0);
    CHECK(j["omega_I"] == nlohmann::json::array({1, 0, 0, 0, 0, 1}));
    CHECK(j["omega_J"] == nlohmann::json::array({0, 1, 0, 0, -1, 0}));
    CHECK(j["omega_K"] == nlohmann::json::array({0, 0, 1, 1, 0, 0}));
}

TEST_CASE("solve report json carries the documented keys") {
    TorusGrid g(8);
    HodgeContext ctx(Connection::flat(g, 1), base_structure_I());
    auto st = rng.stream("rep");
    Form seed = constant_form(g, 1, {cplx(1), cplx(0, 1), cplx(0), cplx(0)},
                              {0.1 * st.cnormal()}, 1);
    SolveReport rep = solve_series(ctx, seed, 1e-10, 6);
    nlohmann::json j = solve_report_to_json(rep);
    for (const char* key : {"converged", "order", "tail_norms", "massey", "del_j",
                            "nhym_residuals", "class_coords", "verdict"})
        CHECK(j.contains(key));
    CHECK(j["nhym_residuals"].contains("eq_d"));
    CHECK(j["nhym_residuals"].contains("eq_d_star"));
    CHECK(j["converged"].get<bool>());
    CHECK(j["class_coords"].size() == 2);
}
