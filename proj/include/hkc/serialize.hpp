#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "hkc/form.hpp"
#include "hkc/hyperkahler.hpp"
#include "hkc/series.hpp"

namespace hkc {

static_assert(std::endian::native == std::endian::little,
              "form binary container is little-endian; big-endian hosts are not supported");

// Flat binary container, layout documented in docs/formats.md:
//   magic "HKF1" | u32 N | u32 degree | u32 rank | i32 band |
//   then comps*rank*rank*N^4 coefficient pairs (f64 re, f64 im) in plane
//   order (component-major, fiber row-major, sites row-major).
inline void write_form(std::ostream& os, const Form& f) {
    os.write("HKF1", 4);
    auto put_u32 = [&](std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
    put_u32(static_cast<std::uint32_t>(f.grid().n));
    put_u32(static_cast<std::uint32_t>(f.degree()));
    put_u32(static_cast<std::uint32_t>(f.rank()));
    const std::int32_t band = f.band();
    os.write(reinterpret_cast<const char*>(&band), 4);
    os.write(reinterpret_cast<const char*>(f.raw().data()),
             static_cast<std::streamsize>(f.raw().size() * sizeof(cplx)));
}

inline Form read_form(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "HKF1", 4) != 0)
        throw std::runtime_error("read_form: bad magic");
    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        is.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    const int n = static_cast<int>(get_u32());
    const int degree = static_cast<int>(get_u32());
    const int rank = static_cast<int>(get_u32());
    std::int32_t band = 0;
    is.read(reinterpret_cast<char*>(&band), 4);
    Form f(TorusGrid(n), degree, rank, band);
    is.read(reinterpret_cast<char*>(f.raw().data()),
            static_cast<std::streamsize>(f.raw().size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("read_form: truncated payload");
    return f;
}

inline nlohmann::json form_to_json(const Form& f) {
    nlohmann::json j;
    j["schema"] = "hk-calculus/form/1";
    j["n"] = f.grid().n;
    j["degree"] = f.degree();
    j["rank"] = f.rank();
    j["band"] = f.band();
    nlohmann::json data = nlohmann::json::array();
    for (const auto& z : f.raw()) {
        data.push_back(z.real());
        data.push_back(z.imag());
    }
    j["data"] = std::move(data);
    return j;
}

inline Form form_from_json(const nlohmann::json& j) {
    if (j.at("schema") != "hk-calculus/form/1")
        throw std::runtime_error("form_from_json: unknown schema");
    Form f(TorusGrid(j.at("n").get<int>()), j.at("degree").get<int>(), j.at("rank").get<int>(),
           j.at("band").get<int>());
    const auto& data = j.at("data");
    if (data.size() != 2 * f.raw().size()) throw std::runtime_error("form_from_json: bad size");
    for (std::size_t i = 0; i < f.raw().size(); ++i)
        f.raw()[i] = cplx(data[2 * i].get<double>(), data[2 * i + 1].get<double>());
    return f;
}

inline nlohmann::json matrix_to_json(const ComplexStructureMatrix& m) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < 16; ++i) j.push_back(m.m[i]);
    return j;
}

inline nlohmann::json hk_structure_to_json(const HKStructure& hk) {
    nlohmann::json j;
    j["schema"] = "hk-calculus/hkstructure/1";
    j["I"] = matrix_to_json(hk.I);
    j["J"] = matrix_to_json(hk.J);
    j["K"] = matrix_to_json(hk.K);
    j["metric"] = "identity";
    auto omega = [&](const std::array<double, 6>& w) {
        nlohmann::json a = nlohmann::json::array();
        for (double v : w) a.push_back(v);
        return a;
    };
    j["omega_I"] = omega(hk.omega_I);
    j["omega_J"] = omega(hk.omega_J);
    j["omega_K"] = omega(hk.omega_K);
    return j;
}

inline nlohmann::json complex_to_json(const cplx& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json solve_report_to_json(const SolveReport& rep) {
    nlohmann::json j;
    j["converged"] = rep.converged;
    j["order"] = rep.order;
    j["tail_norms"] = rep.tail_norms;
    j["massey"] = rep.massey;
    j["del_j"] = rep.del_j;
    j["nhym_residuals"] = {{"eq_d", rep.nhym_residuals.eq_d},
                           {"eq_d_star", rep.nhym_residuals.eq_d_star}};
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& z : rep.class_coords) coords.push_back(complex_to_json(z));
    j["class_coords"] = std::move(coords);
    j["verdict"] = rep.verdict;
    j["obstructed"] = rep.obstructed;
    j["diverged"] = rep.diverged;
    j["envelope"] = rep.envelope;
    return j;
}

}  // namespace hkc
