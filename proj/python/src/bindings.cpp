#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "galoiscache/attack.hpp"
#include "galoiscache/circuit.hpp"
#include "galoiscache/errors.hpp"
#include "galoiscache/report.hpp"

namespace py = pybind11;
using namespace galoiscache;

namespace {

std::shared_ptr<const SkewParams> share(const SkewParams& sp) { return std::make_shared<const SkewParams>(sp); }

AttackScenario make_scenario(const std::string& kind, const SkewParams* skew, std::uint64_t trials, std::uint64_t seed,
                             DomainId victim, std::vector<DomainId> adversaries, std::uint32_t victim_set,
                             bool random_victim_set, double victim_probability, std::uint32_t sets, std::uint32_t ways,
                             const std::string& replacement, unsigned threads) {
  AttackScenario sc;
  sc.kind = parse_attack_kind(kind);
  if (sc.kind == AttackKind::baseline_pp) {
    sc.cache = CacheConfig::conventional(sets, ways, parse_replacement(replacement));
  } else {
    if (!skew) throw ScenarioError(kind + " needs skew parameters");
    sc.cache = CacheConfig::galois(share(*skew));
  }
  sc.victim_domain = victim;
  if (adversaries.empty())
    adversaries = sc.kind == AttackKind::collusion ? std::vector<DomainId>{1, 0} : std::vector<DomainId>{1};
  sc.adversary_domains = std::move(adversaries);
  sc.victim_target_set = victim_set;
  sc.randomize_victim_set = random_victim_set;
  sc.victim_access_probability = victim_probability;
  sc.trials = trials;
  sc.seed = seed;
  sc.threads = threads;
  return sc;
}

}  // namespace

PYBIND11_MODULE(_galoiscache, m) {
  m.doc() = "GaloisCache simulator core";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedField>(m, "UnsupportedField", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::class_<FieldSpec>(m, "FieldSpec")
      .def_static("prime", &FieldSpec::prime, py::arg("p"))
      .def_static("binary", &FieldSpec::binary, py::arg("n"), py::arg("modulus") = std::nullopt)
      .def_property_readonly("p", &FieldSpec::p)
      .def_property_readonly("n", &FieldSpec::n)
      .def_property_readonly("modulus", &FieldSpec::modulus)
      .def_property_readonly("order", &FieldSpec::order)
      .def_property_readonly("name", &FieldSpec::name)
      .def("add", &FieldSpec::add)
      .def("sub", &FieldSpec::sub)
      .def("mul", &FieldSpec::mul)
      .def("inv", &FieldSpec::inv)
      .def("__repr__", &FieldSpec::name);

  m.def("is_irreducible", &is_irreducible, py::arg("n"), py::arg("candidate"));
  m.def("default_modulus", &default_modulus, py::arg("n"));

  py::class_<SkewParams>(m, "SkewParams")
      .def(py::init<FieldSpec, Element, Element, Element>(), py::arg("field"), py::arg("a") = 1, py::arg("b") = 1,
           py::arg("c") = 0)
      .def_property_readonly("field", &SkewParams::field)
      .def_property_readonly("a", &SkewParams::a)
      .def_property_readonly("b", &SkewParams::b)
      .def_property_readonly("c", &SkewParams::c)
      .def_property_readonly("order", &SkewParams::order)
      .def("permute", &SkewParams::permute, py::arg("t"), py::arg("s"), py::arg("w"))
      .def("permute_all_ways", py::overload_cast<Element, Element>(&SkewParams::permute_all_ways, py::const_),
           py::arg("t"), py::arg("s"));

  m.def("solve_intersection_way", &solve_intersection_way, py::arg("skew"), py::arg("t"), py::arg("t2"), py::arg("s"),
        py::arg("s2"));
  m.def(
      "verify_diagonalization",
      [](const SkewParams& sp) { return py::module_::import("json").attr("loads")(to_json(verify_diagonalization(sp)).dump()); },
      py::arg("skew"));
  m.def(
      "verify_way_bijection",
      [](const SkewParams& sp) { return py::module_::import("json").attr("loads")(to_json(verify_way_bijection(sp)).dump()); },
      py::arg("skew"));

  py::class_<AccessOutcome>(m, "AccessOutcome")
      .def_readonly("hit", &AccessOutcome::hit)
      .def_readonly("physical_set", &AccessOutcome::physical_set)
      .def_readonly("way", &AccessOutcome::way)
      .def_readonly("instance", &AccessOutcome::instance)
      .def_property_readonly("evicted_domain", [](const AccessOutcome& o) -> std::optional<DomainId> {
        return o.victim ? std::optional<DomainId>(o.victim->domain) : std::nullopt;
      });

  py::class_<Cache>(m, "Cache")
      .def(py::init([](const SkewParams& sp, std::uint64_t seed) { return Cache(CacheConfig::galois(share(sp), seed)); }),
           py::arg("skew"), py::arg("seed") = 0)
      .def_static(
          "conventional",
          [](std::uint32_t sets, std::uint32_t ways, const std::string& replacement, std::uint64_t seed) {
            return Cache(CacheConfig::conventional(sets, ways, parse_replacement(replacement), seed));
          },
          py::arg("sets"), py::arg("ways"), py::arg("replacement") = "lru", py::arg("seed") = 0)
      .def("access", &Cache::access, py::arg("domain"), py::arg("addr"))
      .def(
          "observe_probe",
          [](Cache& c, DomainId d, const std::vector<Address>& addrs) {
            std::vector<bool> hits;
            for (const auto& r : c.observe_probe(d, addrs)) hits.push_back(r.hit);
            return hits;
          },
          py::arg("domain"), py::arg("addrs"))
      .def("flush_all", &Cache::flush_all, py::arg("reset_stats") = true)
      .def("valid_lines", py::overload_cast<>(&Cache::valid_lines, py::const_))
      .def(
          "stats",
          [](const Cache& c) {
            py::dict out;
            for (const auto& [d, st] : c.stats())
              out[py::int_(d)] = py::dict(py::arg("hits") = st.hits, py::arg("misses") = st.misses,
                                          py::arg("evictions_caused") = st.evictions_caused,
                                          py::arg("self_evictions") = st.self_evictions);
            return out;
          })
      .def("address", [](const Cache& c, std::uint32_t set, std::uint64_t tag) {
        return compose_address(c.config(), AddressParts{tag, set, 0});
      }, py::arg("set"), py::arg("tag"));

  m.def(
      "run_attack",
      [](const std::string& kind, const SkewParams* skew, std::uint64_t trials, std::uint64_t seed, DomainId victim,
         std::vector<DomainId> adversaries, std::uint32_t victim_set, bool random_victim_set, double victim_probability,
         std::uint32_t sets, std::uint32_t ways, const std::string& replacement, unsigned threads) {
        const auto sc = make_scenario(kind, skew, trials, seed, victim, std::move(adversaries), victim_set,
                                      random_victim_set, victim_probability, sets, ways, replacement, threads);
        Json j;
        {
          py::gil_scoped_release release;
          j = to_json(run_attack(sc));
        }
        return py::module_::import("json").attr("loads")(j.dump());
      },
      py::arg("kind"), py::arg("skew") = nullptr, py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("victim") = 2,
      py::arg("adversaries") = std::vector<DomainId>{}, py::arg("victim_set") = 0, py::arg("random_victim_set") = false,
      py::arg("victim_probability") = 1.0, py::arg("sets") = 4, py::arg("ways") = 4, py::arg("replacement") = "lru",
      py::arg("threads") = 1);

  m.def(
      "permutation_cost",
      [](const SkewParams& sp) { return py::module_::import("json").attr("loads")(to_json(permutation_cost(sp)).dump()); },
      py::arg("skew"));
  m.def(
      "const_mul_netlist",
      [](const FieldSpec& f, Element k, const std::string& name) {
        return emit_netlist(matrix_to_network(const_mul_matrix(f, k)), name);
      },
      py::arg("field"), py::arg("k"), py::arg("name") = "net");
}
