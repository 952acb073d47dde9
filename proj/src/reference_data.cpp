// Published design values for the three fabricated CMOS-MEMS Pierce
// oscillators, together with the inputs that regenerate them. This is the
// only place those numbers live.
//
// Directly reported: geometry (H, W, L, W_e, g), C1 = C2 = 2 pF,
// E = 63 GPa, and every entry of `published`.
// Back-solved from the published table and documented as such:
//   density 2770 kg/m^3   rho = k / (w0^2 W H L), consistent for all three
//   bias 9.5 V            eta = sqrt(k C_x) = V_P eps0 A / g^2
//   Q 4000/4500/5000      Q = w0 L_x / R_x
//   C0 10 fF              Re_max = C1 C2 / (2 w0 C0 S)

#include <array>

#include "memsosc/constants.hpp"
#include "memsosc/error.hpp"
#include "memsosc/reference.hpp"

namespace memsosc {

namespace {

DesignInputs make_inputs(Anchor anchor, double length, double width, double electrode, double q,
                         double operating_re) {
  DesignInputs in;
  in.laminate = {4, true};
  in.anchor = anchor;
  in.length = length;
  in.width = width;
  in.quality_factor = q;
  in.gap = 1.2e-6;
  in.electrode_length = electrode;
  in.bias = 9.5;
  in.port = Port::one_port;
  in.caps = {2e-12, 2e-12, 10e-15};
  in.gm = GmChoice::resistance(operating_re);
  return in;
}

const std::array<ReferenceDesign, 3> kDesigns{{
    {"design1", "Design #1",
     make_inputs(Anchor::cantilever, 100e-6, 2e-6, 75e-6, 4000, 64.7e6),
     {75.9e3, 9.8, 3.4 * kNano, 161.1 * kNano, 64.7e6, 103.8e6, 717.0e3, 6013.7, 731.1 * kAtto}},
    {"design2", "Design #2",
     make_inputs(Anchor::cantilever, 60e-6, 1e-6, 45e-6, 4500, 33.6e6),
     {105.4e3, 9.7, 2.9 * kNano, 171.2 * kNano, 33.6e6, 74.7e6, 737.6e3, 5011.5, 454.8 * kAtto}},
    {"design3", "Design #3 (CC-beam)",
     make_inputs(Anchor::clamped_clamped, 100e-6, 1e-6, 80e-6, 5000, 4.7e6),
     {303.6e3, 26.9, 1.5 * kNano, 22.0 * kNano, 4.7e6, 25.9e6, 1008.3e3, 2642.8, 104.0 * kAtto}},
}};

}  // namespace

std::span<const ReferenceDesign> reference_designs() { return kDesigns; }

const ReferenceDesign& reference_design(std::string_view id) {
  for (const auto& d : kDesigns) {
    if (d.id == id) return d;
  }
  throw Error(ErrorKind::invalid_input, "unknown reference design '" + std::string(id) + "'");
}

}  // namespace memsosc
