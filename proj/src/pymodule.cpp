#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <utility>

#include "minwise/bijection.hpp"
#include "minwise/encoder.hpp"
#include "minwise/family.hpp"
#include "minwise/groups.hpp"
#include "minwise/patterns.hpp"
#include "minwise/perm.hpp"
#include "minwise/solver.hpp"

namespace py = pybind11;
using namespace minwise;

PYBIND11_MODULE(_minwise, m) {
    m.doc() = "k-restricted minwise independent permutation families: "
              "verification, SAT encodings, companion combinatorics";

    py::class_<Perm>(m, "Perm")
        .def(py::init<std::vector<int>>(), py::arg("image"))
        .def_static("identity", &Perm::identity, py::arg("n"))
        .def_static("reversal", &Perm::reversal, py::arg("n"))
        .def_property_readonly("n", &Perm::n)
        .def("image", &Perm::image)
        .def("__call__", [](const Perm& p, int i) {
            if (i < 1 || i > p.n()) throw py::index_error("points are 1-based");
            return p(i);
        })
        .def("compose", &Perm::compose)
        .def("inverse", &Perm::inverse)
        .def("__eq__", [](const Perm& a, const Perm& b) { return a == b; })
        .def("__lt__", [](const Perm& a, const Perm& b) { return a < b; })
        .def("__hash__", [](const Perm& p) { return py::hash(py::tuple(py::cast(p.image()))); })
        .def("__str__", &Perm::str)
        .def("__repr__", [](const Perm& p) { return "Perm([" + p.str() + "])"; });

    m.def("z_cat", [](const Perm& p) { return z_cat(incidence(p)); },
          "side-diagonal concatenation of the strict-order incidence matrix");
    m.def("cycle_str", [](const Perm& p) { return cycle_form(p).str(); },
          "canonical cycle form, min-first cycles with decreasing leaders");

    py::class_<Family>(m, "Family")
        .def(py::init([](int n, std::vector<Perm> members) {
                 Family f;
                 f.n = n;
                 f.members = std::move(members);
                 return f;
             }),
             py::arg("n"), py::arg("members"))
        .def_readwrite("n", &Family::n)
        .def_readwrite("members", &Family::members)
        .def_property_readonly("d", &Family::d)
        .def("__len__", &Family::d)
        .def("__str__", [](const Family& f) {
            std::ostringstream ss;
            write_family(ss, f);
            return ss.str();
        })
        .def("__repr__", [](const Family& f) {
            return "Family(n=" + std::to_string(f.n) + ", d=" + std::to_string(f.d()) + ")";
        });

    m.def("parse_family", [](const std::string& text) {
        std::istringstream ss(text);
        return read_family(ss);
    });
    m.def("read_family_file", &read_family_file, py::arg("path"));
    m.def("write_family_file", &write_family_file, py::arg("path"), py::arg("family"));

    py::class_<Witness>(m, "Witness")
        .def_readonly("kind", &Witness::kind)
        .def_readonly("tuple", &Witness::tuple)
        .def_readonly("observed", &Witness::observed)
        .def_readonly("required", &Witness::required)
        .def("__str__", &Witness::str);

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("property", &VerificationReport::property)
        .def_readonly("k", &VerificationReport::k)
        .def_readonly("holds", &VerificationReport::holds)
        .def_readonly("witness", &VerificationReport::witness)
        .def("__bool__", [](const VerificationReport& r) { return r.holds; });

    m.def("verify_minwise", &verify_minwise, py::arg("family"), py::arg("k"));
    m.def("verify_rankwise", &verify_rankwise, py::arg("family"), py::arg("k"));
    m.def("min_collision_prob",
          [](const Family& f, const std::vector<int>& A, const std::vector<int>& B) {
              Rational r = min_collision_prob(f, A, B);
              return std::pair(r.num, r.den);
          },
          py::arg("family"), py::arg("A"), py::arg("B"),
          "exact probability that min p(A) == min p(B), as (num, den)");

    m.def("double_family", &double_family, py::arg("family"), py::arg("k"));
    m.def("restrict_family", &restrict_family, py::arg("family"), py::arg("n_tilde"));
    m.def("normalize", &normalize, py::arg("family"));

    m.def("lcm_upto", &lcm_upto);
    m.def("subfactorial", &subfactorial);
    m.def("binomial", &binomial);
    m.def("lower_bound_minwise", &lower_bound_minwise, py::arg("n"), py::arg("k"));
    m.def("upper_bound_minwise", &upper_bound_minwise, py::arg("n"), py::arg("k"));
    m.def("bargachev_bound", &bargachev_bound, py::arg("n"), py::arg("k"));

    m.def("waste_indices", &waste_indices);
    m.def("phi", &phi);
    m.def("phi_inverse", &phi_inverse);
    m.def("count_by_class", [](int n) {
        ClassCounts c = count_by_class(n);
        return std::pair(c.fixed_points, c.waste);
    }, py::arg("n"), "(#perms by fixed-point count, #perms by waste-index count)");

    m.def("enumerate_sop", &enumerate_sop, py::arg("n"), py::arg("j"));
    m.def("enumerate_subperms", &enumerate_subperms, py::arg("n"), py::arg("k"));

    py::class_<SemiPattern>(m, "SemiPattern")
        .def_readonly("s", &SemiPattern::s)
        .def("__repr__", [](const SemiPattern& p) {
            std::string out = "SemiPattern([";
            for (size_t i = 0; i < p.s.size(); ++i)
                out += (i ? ", " : "") + std::to_string(p.s[i]);
            return out + "])";
        });

    py::class_<Subgroup>(m, "Subgroup")
        .def_readonly("n", &Subgroup::n)
        .def_readonly("elements", &Subgroup::elements)
        .def_readonly("generators", &Subgroup::generators)
        .def_property_readonly("order", &Subgroup::order)
        .def("generators_str", &Subgroup::generators_str)
        .def("__len__", [](const Subgroup& g) { return g.elements.size(); })
        .def("__repr__", [](const Subgroup& g) {
            return "Subgroup(n=" + std::to_string(g.n) + ", order=" + std::to_string(g.order()) +
                   ", <" + g.generators_str() + ">)";
        });

    py::class_<SubgroupClass>(m, "SubgroupClass")
        .def_readonly("representative", &SubgroupClass::representative)
        .def_readonly("members", &SubgroupClass::members);

    m.def("closure", &closure, py::arg("n"), py::arg("generators"));
    m.def("subgroups_of_order", &subgroups_of_order, py::arg("n"), py::arg("order"));
    m.def("conjugacy_classes", &conjugacy_classes, py::arg("subgroups"), py::arg("n"));
    m.def("parse_generator_list", &parse_generator_list, py::arg("line"), py::arg("n"));

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("n", &ModelConfig::n)
        .def_readwrite("k", &ModelConfig::k)
        .def_readwrite("d", &ModelConfig::d)
        .def_readwrite("H", &ModelConfig::H)
        .def_readwrite("fix_first", &ModelConfig::fix_first)
        .def_readwrite("rankwise", &ModelConfig::rankwise)
        .def_readwrite("paper_literal_right", &ModelConfig::paper_literal_right)
        .def_property("mode",
                      [](const ModelConfig& c) { return mode_name(c.mode); },
                      [](ModelConfig& c, const std::string& s) { c.mode = mode_from_name(s); });

    m.def("default_prefix_len", &default_prefix_len);

    m.def("encode",
          [](const ModelConfig& cfg, std::optional<Subgroup> group) {
              BuildResult b = build(cfg, group ? &*group : nullptr);
              std::ostringstream cnf, map;
              write_dimacs(cnf, b.cnf);
              write_map(map, b.map);
              return std::pair(cnf.str(), map.str());
          },
          py::arg("cfg"), py::arg("group") = std::nullopt,
          "(DIMACS text, decode-map text) for the configured model");

    m.def("solve",
          [](const ModelConfig& cfg, std::optional<Subgroup> group, double time_limit) {
              BuildResult b = build(cfg, group ? &*group : nullptr);
              SolveResult r = solve_internal(b.cnf, time_limit);
              if (r.status == SolveStatus::error) throw std::runtime_error(r.message);
              std::optional<Family> fam;
              if (r.status == SolveStatus::sat) fam = decode(r.model, b.map);
              return std::pair(status_name(r.status), std::move(fam));
          },
          py::arg("cfg"), py::arg("group") = std::nullopt, py::arg("time_limit") = 0.0,
          "internal solver; returns (status, decoded family or None)");
}
