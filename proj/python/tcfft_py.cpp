#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <string>
#include <vector>

#include "tcfft/error.hpp"
#include "tcfft/executor.hpp"
#include "tcfft/half.hpp"
#include "tcfft/mma.hpp"
#include "tcfft/oracle.hpp"
#include "tcfft/plan.hpp"

namespace py = pybind11;
using namespace tcfft;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

std::vector<cplx> to_vector(const CArray& a) {
  return std::vector<cplx>(a.data(), a.data() + a.size());
}

CArray to_array(const std::vector<cplx>& v, const std::vector<py::ssize_t>& shape) {
  CArray out(shape);
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(cplx));
  return out;
}

std::vector<py::ssize_t> shape_of(const CArray& a) { return {a.shape(), a.shape() + a.ndim()}; }

ExecOptions exec_options(const std::string& accumulate, int workers) {
  ExecOptions o;
  if (accumulate == "fp16") {
    o.accumulate = AccumulatePrecision::fp16;
  } else if (accumulate != "fp32") {
    throw ArgumentError("accumulate must be fp32 or fp16");
  }
  o.workers = workers;
  return o;
}

// Runs a plan over the flattened array; the trailing axes hold one sequence.
CArray run(const Plan& plan, const CArray& x, const std::string& accumulate, int workers) {
  std::vector<cplx> data = to_vector(x);
  const std::size_t len = sequence_length(plan);
  const ExecOptions opts = exec_options(accumulate, workers);
  if (plan.precision == PrecisionMode::double_reference) {
    py::gil_scoped_release release;
    execute(plan, BatchedTensor<cplx>(std::span<cplx>(data), plan.batch, len), opts);
  } else {
    std::vector<ComplexHalf> h = narrow_to_half(data);
    {
      py::gil_scoped_release release;
      execute(plan, BatchedTensor<ComplexHalf>(std::span<ComplexHalf>(h), plan.batch, len), opts);
    }
    data = widen(h);
  }
  return to_array(data, shape_of(x));
}

PlanOptions plan_options(int continuous_size, const std::string& mode) {
  PlanOptions o;
  o.continuous_size = continuous_size;
  o.precision = parse_precision(mode);
  return o;
}

CArray fft(const CArray& x, const std::string& mode, int continuous_size, const std::string& accumulate,
           int workers) {
  if (x.ndim() < 1) throw ShapeMismatch("fft needs at least one axis");
  const auto n = static_cast<std::size_t>(x.shape(x.ndim() - 1));
  const std::size_t batch = n == 0 ? 0 : static_cast<std::size_t>(x.size()) / n;
  return run(plan_1d(n, batch, plan_options(continuous_size, mode)), x, accumulate, workers);
}

CArray fft2(const CArray& x, const std::string& mode, int continuous_size, const std::string& accumulate,
            int workers) {
  if (x.ndim() < 2) throw ShapeMismatch("fft2 needs at least two axes");
  const auto nx = static_cast<std::size_t>(x.shape(x.ndim() - 2));
  const auto ny = static_cast<std::size_t>(x.shape(x.ndim() - 1));
  const std::size_t batch = nx * ny == 0 ? 0 : static_cast<std::size_t>(x.size()) / (nx * ny);
  return run(plan_2d(nx, ny, batch, plan_options(continuous_size, mode)), x, accumulate, workers);
}

}  // namespace

PYBIND11_MODULE(_tcfft, m) {
  m.doc() = "Half-precision FFT built from emulated 16x16x16 MMA merges";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UnsupportedSize>(m, "UnsupportedSize", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<ShapeMismatch>(m, "ShapeMismatch", base.ptr());

  m.def("round_to_half", [](double x) { return round_to_half(x).bits(); },
        "binary16 bit pattern nearest to x (ties to even)");
  m.def("half_to_float", [](std::uint16_t bits) { return Half::from_bits(bits).to_double(); });

  py::class_<Plan>(m, "Plan")
      .def_readonly("dims", &Plan::dims)
      .def_readonly("nx", &Plan::nx)
      .def_readonly("ny", &Plan::ny)
      .def_readonly("batch", &Plan::batch)
      .def_readonly("schedule_x", &Plan::schedule_x)
      .def_readonly("schedule_y", &Plan::schedule_y)
      .def_readonly("continuous_size", &Plan::continuous_size)
      .def_property_readonly("precision", [](const Plan& p) { return to_string(p.precision); })
      .def("to_json", [](const Plan& p) { return to_json(p); })
      .def("__repr__", [](const Plan& p) { return "Plan(" + to_json(p) + ")"; });

  m.def("schedule_radices", &schedule_radices, py::arg("n"));
  m.def(
      "plan_1d",
      [](std::size_t n, std::size_t batch, int cs, const std::string& mode) {
        return plan_1d(n, batch, plan_options(cs, mode));
      },
      py::arg("n"), py::arg("batch") = 1, py::arg("continuous_size") = kDefaultContinuousSize,
      py::arg("mode") = "half");
  m.def(
      "plan_2d",
      [](std::size_t nx, std::size_t ny, std::size_t batch, int cs, const std::string& mode) {
        return plan_2d(nx, ny, batch, plan_options(cs, mode));
      },
      py::arg("nx"), py::arg("ny"), py::arg("batch") = 1, py::arg("continuous_size") = kDefaultContinuousSize,
      py::arg("mode") = "half");

  m.def("fft", &fft, py::arg("x"), py::arg("mode") = "half", py::arg("continuous_size") = kDefaultContinuousSize,
        py::arg("accumulate") = "fp32", py::arg("workers") = 1,
        "Forward transform over the last axis. Half mode rounds the input to binary16 first.");
  m.def("fft2", &fft2, py::arg("x"), py::arg("mode") = "half", py::arg("continuous_size") = kDefaultContinuousSize,
        py::arg("accumulate") = "fp32", py::arg("workers") = 1, "Forward 2D transform over the last two axes.");
  m.def("execute", &run, py::arg("plan"), py::arg("x"), py::arg("accumulate") = "fp32", py::arg("workers") = 1);

  m.def("naive_dft", [](const CArray& x) { return to_array(naive_dft(to_vector(x)), {x.size()}); });
  m.def("reference_fft64", [](const CArray& x) { return to_array(reference_fft64(to_vector(x)), {x.size()}); });
  m.def("relative_error", [](const CArray& x, const CArray& ref) {
    const auto a = to_vector(x);
    const auto b = to_vector(ref);
    return relative_error(std::span<const cplx>(a), std::span<const cplx>(b));
  });
  m.def("radix2_equiv_tflops", &radix2_equiv_tflops, py::arg("n"), py::arg("batch"), py::arg("repeats"),
        py::arg("seconds"));
  m.def("default_fragment_map_json", [] { return default_fragment_map()->to_json(); });
}
