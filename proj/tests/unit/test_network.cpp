#include <doctest.h>

#include "ifo/network.hpp"
#include "ifo/presets.hpp"

using namespace ifo;
using namespace ifo::net;

namespace {

OpticalNetwork cavity_skeleton() {
  OpticalNetwork n;
  n.add_laser("laser");
  n.add_mirror("M1", MirrorParams::from_budget(0.9, 0.1, 0.0));
  n.add_space("s", 10.0);
  n.add_mirror("M2", MirrorParams::from_budget(0.9, 0.1, 0.0));
  n.add_detector("DET");
  n.connect("laser.out", "M1.fr");
  n.connect("M1.bk", "s.a");
  n.connect("s.b", "M2.fr");
  n.connect("M2.bk", "DET.in");
  return n;
}

}  // namespace

TEST_CASE("port indexing and peers") {
  auto n = cavity_skeleton();
  n.add_probe("inside", "M2.fr");
  n.finalize();
  CHECK(n.port_count() == 1 + 2 + 2 + 2 + 1);
  const auto a = n.port_index("M1.bk");
  const auto b = n.port_index("s.a");
  CHECK(n.peer(a) == b);
  CHECK(n.peer(b) == a);
  CHECK(n.port_label(a) == "M1.bk");
  CHECK(n.count("mirror") == 2);
  CHECK(n.readout() == n.component_index("DET"));
  CHECK(n.probes().at("inside") == "M2.fr");
  CHECK_THROWS_AS(n.component("nope"), LookupError);
  CHECK_THROWS_AS(n.add_detector("late"), StructuralError);
}

TEST_CASE("open mirror ports are allowed") {
  OpticalNetwork n;
  n.add_laser("laser");
  n.add_beamsplitter("BS", MirrorParams::from_budget(0.5, 0.5, 0.0));
  n.add_detector("DET");
  n.connect("laser.out", "BS.fr1");
  n.connect("BS.bk2", "DET.in");
  CHECK_NOTHROW(n.finalize());
  CHECK_FALSE(n.peer(n.port_index("BS.fr2")).has_value());
}

TEST_CASE("structural errors") {
  SUBCASE("dangling space") {
    OpticalNetwork n;
    n.add_laser("laser");
    n.add_space("s", 1.0);
    n.add_detector("DET");
    n.connect("laser.out", "s.a");
    CHECK_THROWS_AS(n.finalize(), StructuralError);
  }
  SUBCASE("duplicate names and self connection") {
    OpticalNetwork n;
    n.add_laser("laser");
    CHECK_THROWS_AS(n.add_laser("laser"), StructuralError);
    CHECK_THROWS_AS(n.connect("laser.out", "laser.out"), StructuralError);
  }
  SUBCASE("unknown port") {
    auto n = cavity_skeleton();
    CHECK_THROWS_AS(
        [&] {
          n.connect("M1.side", "M2.bk");
          n.finalize();
        }(),
        StructuralError);
  }
  SUBCASE("port used twice") {
    auto n = cavity_skeleton();
    n.add_detector("D2");
    n.connect("M2.bk", "D2.in");
    CHECK_THROWS_AS(n.finalize(), StructuralError);
  }
  SUBCASE("no laser") {
    OpticalNetwork n;
    n.add_mirror("M", MirrorParams::perfect());
    n.add_detector("DET");
    n.connect("M.bk", "DET.in");
    CHECK_THROWS_AS(n.finalize(), StructuralError);
  }
  SUBCASE("unreachable detector") {
    OpticalNetwork n;
    n.add_laser("laser");
    n.add_mirror("M", MirrorParams::perfect());
    n.add_mirror("X", MirrorParams::perfect());
    n.add_detector("DET");
    n.connect("laser.out", "M.fr");
    n.connect("X.bk", "DET.in");
    CHECK_THROWS_AS(n.finalize(), StructuralError);
  }
  SUBCASE("two detectors need a readout") {
    OpticalNetwork n;
    n.add_laser("laser");
    n.add_beamsplitter("BS", MirrorParams::from_budget(0.5, 0.5, 0.0));
    n.add_detector("A");
    n.add_detector("B");
    n.connect("laser.out", "BS.fr1");
    n.connect("BS.bk2", "A.in");
    n.connect("BS.fr2", "B.in");
    CHECK_THROWS_AS(n.finalize(), StructuralError);
  }
  SUBCASE("bad parameters") {
    OpticalNetwork n;
    CHECK_THROWS_AS(n.add_space("s", -1.0), ValidationError);
    CHECK_THROWS_AS(n.add_space("s", 1.0, 0.0, 2), ValidationError);
  }
}

TEST_CASE("presets build and expose their probes") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto n = build_preset(name);
    CHECK(n.finalized());
    CHECK(n.count("laser") == 1);
    CHECK(n.count("detector") == 1);
    CHECK_FALSE(n.probes().empty());
  }
  CHECK(build_preset("gmi").count("beamsplitter") == 2);
  CHECK(build_preset("gmi-dr").probes().count("PRM") == 1);
  CHECK(build_preset("gmi-dr").probes().count("SRM") == 1);
  CHECK(build_preset("mi").probes().count("BS") == 1);
  CHECK(preset_is_resonant("aligo-simplified"));
  CHECK_FALSE(preset_is_resonant("gmi"));
  CHECK_THROWS_AS(build_preset("sagnac"), ValidationError);
}
