#pragma once

// Sweep presets for the SNR figures fig1 .. fig9. Each panel becomes one
// CSV whose `#` header records every parameter and convention used.

#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/modes.hpp"
#include "wmp/qubit.hpp"
#include "wmp/snr.hpp"
#include "wmp/sweep.hpp"

namespace wmp {

struct PanelSpec {
  std::string figure;
  std::string panel;     // a, b, c, ...
  std::string kind;      // surface | lines
  std::string quantity;  // snr_x | snr_y
  std::string series;    // what distinguishes the curves: mode
  std::string label;     // caption fragment for this panel
  SweepGrid grid;
  std::string s_axis;
  std::string selection_axis;

  [[nodiscard]] std::string file_name() const { return figure + "_" + panel + ".csv"; }
};

struct FigurePreset {
  std::string name;
  std::string title;
  std::vector<PanelSpec> panels;
};

struct PresetOverrides {
  std::optional<double> s_step;
  std::optional<int> theta_divisions;  // theta = k pi / d, k = 1..d-1
};

inline std::string join_modes(const std::vector<PointerMode>& modes) {
  std::string out;
  for (const auto& m : modes) out += (out.empty() ? "" : " ") + m.to_string();
  return out;
}

inline std::vector<std::pair<std::string, std::string>> panel_metadata(const PanelSpec& p, const EvaluationOptions& opts) {
  return {{"figure", p.figure},
          {"panel", p.panel},
          {"label", p.label},
          {"kind", p.kind},
          {"quantity", p.quantity},
          {"series", p.series},
          {"class", to_string(p.grid.op_class)},
          {"modes", join_modes(p.grid.modes)},
          {"s_axis", p.s_axis},
          {"selection", p.selection_axis},
          {"sigma", format_number(p.grid.sigma)},
          {"n_measurements", std::to_string(opts.n_measurements)},
          {"ps_convention", to_string(opts.ps_convention)},
          {"truncation_tolerance", format_number(opts.oracle.truncation_tolerance)}};
}

namespace detail {

inline std::string panel_letter(std::size_t i) { return std::string(1, static_cast<char>('a' + i)); }

inline std::string axis_text(double start, double stop, double step) {
  return format_number(start) + ":" + format_number(stop) + ":" + format_number(step);
}

struct PresetBuilder {
  std::string figure;
  PresetOverrides over;
  double sigma = 1.0;

  [[nodiscard]] std::pair<std::vector<double>, std::string> s_axis(double stop, double default_step) const {
    const double step = over.s_step.value_or(default_step);
    return {range_axis(0.0, stop, step), axis_text(0.0, stop, step)};
  }

  [[nodiscard]] PanelSpec surface(std::size_t index, std::vector<PointerMode> modes, OperatorClass cls, double phi,
                                  std::string quantity, std::string label) const {
    const int div = over.theta_divisions.value_or(32);
    if (div < 2) throw ConfigError("theta divisions must be at least 2");
    std::vector<double> thetas;
    for (int k = 1; k < div; ++k) thetas.push_back(k * std::numbers::pi / div);
    auto [s, s_text] = s_axis(4.0, 0.1);
    PanelSpec p{figure, panel_letter(index), "surface", std::move(quantity), "mode", std::move(label), {}, s_text, {}};
    p.grid = {std::move(s), SweepGrid::angle_axis(thetas, {phi}), std::move(modes), cls, sigma};
    p.selection_axis = "theta=k*pi/" + std::to_string(div) + " (k=1.." + std::to_string(div - 1) + "), phi=" + format_number(phi);
    return p;
  }

  [[nodiscard]] PanelSpec lines(std::size_t index, std::vector<PointerMode> modes, OperatorClass cls, cdouble w,
                                std::string quantity) const {
    auto [s, s_text] = s_axis(10.0, 0.1);
    const std::string wtext = format_weak_value(w);
    PanelSpec p{figure, panel_letter(index), "lines", std::move(quantity), "mode", "weak value " + wtext, {}, s_text,
                "weak_value=" + wtext};
    p.grid = {std::move(s), {SelectionPoint::from_weak_value(w)}, std::move(modes), cls, sigma};
    return p;
  }
};

inline std::vector<PointerMode> hg_family() { return {PointerMode::hg(0), PointerMode::hg(1), PointerMode::hg(2), PointerMode::hg(3)}; }

inline std::vector<PointerMode> lg_family() {
  return {PointerMode::lg(0, 0), PointerMode::lg(0, 1), PointerMode::lg(0, 2), PointerMode::lg(1, 1), PointerMode::lg(2, 2)};
}

inline std::vector<PointerMode> lg_azimuthal_family() {
  return {PointerMode::lg(0, 1), PointerMode::lg(0, 2), PointerMode::lg(0, 3), PointerMode::lg(0, 4)};
}

inline const std::vector<cdouble>& x_weak_values() {
  static const std::vector<cdouble> w{{0.5, 0.0}, {0.5, 1.0}, {5.0, 0.0}, {5.0, 5.0}};
  return w;
}

}  // namespace detail

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
  return names;
}

inline FigurePreset figure_preset(const std::string& name, const PresetOverrides& over = {}) {
  using detail::PresetBuilder;
  constexpr auto inv = OperatorClass::involutory;
  constexpr auto proj = OperatorClass::projector;
  PresetBuilder b{name, over};
  FigurePreset f{name, {}, {}};

  auto add_x_lines = [&](const std::vector<PointerMode>& modes, OperatorClass cls) {
    const auto& ws = detail::x_weak_values();
    for (std::size_t i = 0; i < ws.size(); ++i) f.panels.push_back(b.lines(i, modes, cls, ws[i], "snr_x"));
  };
  auto add_lg_surfaces = [&](double phi, const std::string& quantity) {
    std::size_t i = 0;
    for (int p = 0; p <= 2; ++p)
      for (int l = 0; l <= 2; ++l)
        f.panels.push_back(b.surface(i++, {PointerMode::lg(p, l)}, inv, phi, quantity, "p=" + std::to_string(p) + ", l=" + std::to_string(l)));
  };

  if (name == "fig1") {
    f.title = "SNR_x surfaces over (s, theta), HG modes, A^2 = I, phi = 0";
    for (int n = 0; n <= 2; ++n) f.panels.push_back(b.surface(n, {PointerMode::hg(n)}, inv, 0.0, "snr_x", "n=" + std::to_string(n)));
  } else if (name == "fig2") {
    f.title = "SNR_x vs s, HG modes, A^2 = I";
    add_x_lines(detail::hg_family(), inv);
  } else if (name == "fig3") {
    f.title = "SNR_x vs s, HG modes, A^2 = A";
    add_x_lines(detail::hg_family(), proj);
  } else if (name == "fig4") {
    f.title = "SNR_x surfaces over (s, theta), LG modes, A^2 = I, phi = 0";
    add_lg_surfaces(0.0, "snr_x");
  } else if (name == "fig5") {
    f.title = "SNR_x vs s, LG modes, A^2 = I";
    add_x_lines(detail::lg_family(), inv);
  } else if (name == "fig6") {
    f.title = "SNR_y surfaces over (s, theta), LG modes, A^2 = I, phi = pi/2";
    add_lg_surfaces(std::numbers::pi / 2, "snr_y");
  } else if (name == "fig7") {
    f.title = "SNR_y vs s, LG p = 0, A^2 = I";
    const std::vector<cdouble> ws{{0.0, 1.0}, {0.5, 1.0}, {0.0, 5.0}, {5.0, 5.0}};
    for (std::size_t i = 0; i < ws.size(); ++i) f.panels.push_back(b.lines(i, detail::lg_azimuthal_family(), inv, ws[i], "snr_y"));
  } else if (name == "fig8") {
    f.title = "SNR_x vs s, LG modes, A^2 = A";
    add_x_lines(detail::lg_family(), proj);
  } else if (name == "fig9") {
    f.title = "SNR_y vs s, LG p = 0, A^2 = A";
    const std::vector<cdouble> ws{{0.0, 1.0}, {0.5, 1.0}, {1.0, 1.0}, {0.0, 5.0}, {0.5, 5.0}, {5.0, 5.0}};
    for (std::size_t i = 0; i < ws.size(); ++i) f.panels.push_back(b.lines(i, detail::lg_azimuthal_family(), proj, ws[i], "snr_y"));
  } else {
    throw ConfigError("unknown figure '" + name + "' (expected fig1..fig9)");
  }
  return f;
}

}  // namespace wmp
