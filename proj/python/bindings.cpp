#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlob/config.hpp"
#include "mlob/errors.hpp"
#include "mlob/free_boundary.hpp"
#include "mlob/simulation.hpp"
#include "mlob/strategy.hpp"
#include "mlob/value_function.hpp"

namespace py = pybind11;
using namespace mlob;

namespace {

// pybind11 holders are non-const
template <class T>
std::shared_ptr<T> mut(std::shared_ptr<const T> p) {
    return std::const_pointer_cast<T>(std::move(p));
}

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["estimate"] = e.estimate;
    d["std_error"] = e.std_error;
    d["n_paths"] = e.n_paths;
    d["seed"] = e.seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal liquidation under multiplicative transient price impact";

    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
    static py::exception<DomainError> domain(m, "DomainError", base.ptr());
    static py::exception<RangeError> range(m, "RangeError", base.ptr());
    static py::exception<ArgumentError> argument(m, "ArgumentError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            PyErr_SetString(validation.ptr(), e.what());
        } catch (const DomainError& e) {
            PyErr_SetString(domain.ptr(), e.what());
        } catch (const RangeError& e) {
            PyErr_SetString(range.ptr(), e.what());
        } catch (const ArgumentError& e) {
            PyErr_SetString(argument.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    py::class_<MarketSpec, std::shared_ptr<MarketSpec>>(m, "MarketSpec")
        .def_readonly("delta", &MarketSpec::delta)
        .def_readonly("name", &MarketSpec::name)
        .def_property_readonly("domain", [](const MarketSpec& s) { return py::make_tuple(s.domain.lo, s.domain.hi); })
        .def("f", [](const MarketSpec& s, double y) { return s.f(y); })
        .def("F", [](const MarketSpec& s, double y) { return s.F(y); })
        .def("h", [](const MarketSpec& s, double y) { return s.h(y); })
        .def("in_domain", &MarketSpec::in_domain);

    m.def(
        "power_law_spec",
        [](double c, double r, double beta, double delta, bool allow_zero_delta) {
            return std::make_shared<MarketSpec>(power_law_spec({c, r, beta}, delta, allow_zero_delta));
        },
        py::arg("c") = 1.0, py::arg("r") = 1.0, py::arg("beta") = 1.0, py::arg("delta") = 0.5,
        py::arg("allow_zero_delta") = false);

    m.def(
        "check_assumptions",
        [](const MarketSpec& s, double lo, double hi) {
            auto rep = check_assumptions(s, {lo, hi});
            py::dict d;
            d["valid"] = rep.valid;
            d["violations"] = rep.violations;
            d["summary"] = rep.summary();
            return d;
        },
        py::arg("spec"), py::arg("lo"), py::arg("hi"));

    m.def("critical_points", [](const MarketSpec& s) {
        auto cp = critical_points(s);
        return py::make_tuple(cp.y0, cp.y_inf);
    });

    py::class_<FreeBoundary, std::shared_ptr<FreeBoundary>>(m, "FreeBoundary")
        .def_property_readonly("y0", [](const FreeBoundary& b) { return b.critical().y0; })
        .def_property_readonly("y_inf", [](const FreeBoundary& b) { return b.critical().y_inf; })
        .def_property_readonly("theta_covered", &FreeBoundary::theta_covered)
        .def_property_readonly("asymptote_reached", &FreeBoundary::asymptote_reached)
        .def("theta_at", &FreeBoundary::theta_at)
        .def("y_at", &FreeBoundary::y_at)
        .def("tau_at", &FreeBoundary::tau_at)
        .def("of_ttl", &FreeBoundary::of_ttl)
        .def("samples", [](const FreeBoundary& b) {
            std::vector<std::tuple<double, double, double>> out;
            for (const auto& p : b.samples()) out.emplace_back(p.y, p.theta, p.tau);
            return out;
        });

    m.def(
        "solve_boundary",
        [](std::shared_ptr<MarketSpec> s, double theta_max) {
            return mut(solve_boundary(s, critical_points(*s), theta_max));
        },
        py::arg("spec"), py::arg("theta_max") = 60.0);

    py::class_<ValueField>(m, "ValueField")
        .def(py::init([](std::shared_ptr<FreeBoundary> fb) { return ValueField(fb); }))
        .def("value", &ValueField::value)
        .def("value_two_sided", &ValueField::value_two_sided)
        .def("partials",
             [](const ValueField& f, double y, double th, bool two) {
                 Partials p = two ? f.partials_two_sided(y, th) : f.partials(y, th);
                 return py::make_tuple(p.v_y, p.v_theta);
             },
             py::arg("y"), py::arg("theta"), py::arg("two_sided") = false)
        .def("region",
             [](const ValueField& f, double y, double th, bool two) { return std::string(to_string(f.region(y, th, two))); },
             py::arg("y"), py::arg("theta"), py::arg("two_sided") = false);

    py::class_<Schedule>(m, "Schedule")
        .def_property_readonly("kind", [](const Schedule& s) { return std::string(to_string(s.kind)); })
        .def_readonly("initial_block", &Schedule::initial_block)
        .def_readonly("wait_time", &Schedule::wait_time)
        .def_readonly("terminal_time", &Schedule::terminal_time)
        .def("state_at",
             [](const Schedule& s, double t) {
                 auto st = s.state_at(t);
                 py::dict d;
                 d["theta"] = st.theta;
                 d["y"] = st.y;
                 d["a"] = st.a;
                 d["rate"] = st.rate;
                 return d;
             })
        .def(
            "execute",
            [](const Schedule& s, double dt, double horizon) {
                std::vector<std::tuple<double, double, double, double, double>> out;
                for (const auto& p : execute(s, dt, horizon).samples) out.emplace_back(p.t, p.theta, p.y, p.a, p.rate);
                return out;
            },
            py::arg("dt"), py::arg("horizon") = 0.0)
        .def("analytic_J", [](const Schedule& s, double s0, double delta) { return analytic_J(s, s0, delta); },
             py::arg("s0"), py::arg("delta"));

    m.def(
        "optimal_schedule",
        [](std::shared_ptr<FreeBoundary> fb, double y, double th, bool two) {
            return two ? optimal_schedule_two_sided(fb, y, th) : optimal_schedule(fb, y, th);
        },
        py::arg("boundary"), py::arg("y"), py::arg("theta"), py::arg("two_sided") = false);

    m.def(
        "type_a_schedule",
        [](std::shared_ptr<MarketSpec> s, double T, double y, double th) {
            auto p = type_a_schedule(s, T, y, th);
            return py::make_tuple(p.schedule, p.y_star, p.y_hold, p.bound);
        },
        py::arg("spec"), py::arg("T"), py::arg("y"), py::arg("theta"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("mu", &SimConfig::mu)
        .def_readwrite("sigma", &SimConfig::sigma)
        .def_readwrite("gamma", &SimConfig::gamma)
        .def_readwrite("s0", &SimConfig::s0)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("n_paths", &SimConfig::n_paths)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("workers", &SimConfig::workers);

    m.def("proceeds_estimate", [](const MarketSpec& s, const Schedule& sc, const SimConfig& cfg) {
        return estimate_dict(proceeds_estimate(s, sc, cfg));
    });
    m.def(
        "negative_price_probability",
        [](const SimConfig& cfg, double rho, double x, bool bachelier) {
            return estimate_dict(negative_price_probability(cfg, rho, x, bachelier));
        },
        py::arg("cfg"), py::arg("rho"), py::arg("x"), py::arg("bachelier") = false);
    m.def("default_seed", &default_seed);

    m.def("load_config", [](const std::string& path) { return Config::load(path).resolved(); });
}
