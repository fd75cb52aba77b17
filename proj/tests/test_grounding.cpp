#include <doctest.h>

#include "osagent/detector.hpp"
#include "osagent/errors.hpp"
#include "osagent/grounding.hpp"
#include "osagent/sim.hpp"
#include "osagent/util.hpp"

using namespace osagent;

namespace {

std::string data_path(const std::string& name) {
    return std::string(OSAGENT_TEST_DATA_DIR) + "/" + name;
}

A11yNode start_fixture() {
    return parse_a11y(read_file(data_path("start_button.a11y")));
}

} // namespace

TEST_CASE("interactable role table") {
    for (const char* r : {"button", "textfield", "menuitem", "checkbox", "link", "icon",
                          "listitem", "tab"})
        CHECK(is_interactable_role(r));
    CHECK_FALSE(is_interactable_role("label"));
    CHECK_FALSE(is_interactable_role("window"));
    CHECK_FALSE(is_interactable_role("desktop"));
    CHECK_FALSE(is_interactable_role("Button")); // case sensitive
}

TEST_CASE("normalize_bounds divides by screen extent and quantizes to 4 places") {
    NormBox b = normalize_bounds({70, 95, 76, 100}, 200, 100);
    CHECK(b.x1 == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(b.y1 == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(b.x2 == doctest::Approx(0.38).epsilon(1e-12));
    CHECK(b.y2 == doctest::Approx(1.0).epsilon(1e-12));

    // 1/3 quantized: 0.3333, not 0.33333...
    NormBox t = normalize_bounds({1, 0, 2, 1}, 3, 3);
    CHECK(t.x1 == doctest::Approx(0.3333).epsilon(1e-12));
    CHECK(t.x2 == doctest::Approx(0.6667).epsilon(1e-12));
}

TEST_CASE("normalize_bounds rejects a degenerate screen") {
    CHECK_THROWS_AS(normalize_bounds({0, 0, 1, 1}, 0, 100), DegenerateScreenError);
    CHECK_THROWS_AS(normalize_bounds({0, 0, 1, 1}, 100, -1), DegenerateScreenError);
}

TEST_CASE("denormalize inverts normalize on exact pixel grids") {
    PixelRect r{12, 18, 148, 70};
    NormBox b = normalize_bounds(r, 200, 100);
    CHECK(denormalize(b, 200, 100) == r);
}

TEST_CASE("resolve_target is the box center") {
    auto [cx, cy] = resolve_target({0.2, 0.4, 0.6, 0.8});
    CHECK(cx == doctest::Approx(0.4));
    CHECK(cy == doctest::Approx(0.6));
}

TEST_CASE("to_pixels rounds then clamps into the screen") {
    CHECK(to_pixels(0.5, 0.5, 200, 100) == std::pair{100, 50});
    CHECK(to_pixels(1.0, 1.0, 200, 100) == std::pair{199, 99}); // clamped
    CHECK(to_pixels(0.0, 0.0, 200, 100) == std::pair{0, 0});
    CHECK(to_pixels(-0.5, 2.0, 200, 100) == std::pair{0, 99});
}

TEST_CASE("extract_interactables numbers enabled controls 1..n in pre-order") {
    A11yNode root = start_fixture();
    auto elems = extract_interactables(root);
    REQUIRE(elems.size() == 14);
    for (size_t i = 0; i < elems.size(); i++) CHECK(elems[i].id == static_cast<int>(i) + 1);
    CHECK(elems[0].label == "File");
    CHECK(elems[3].role == "textfield");
    CHECK(elems[13].label == "Start");
    // @id beats the positional path as identity.
    CHECK(elems[13].source_path == "launcher.start");
    CHECK(elems[0].source_path == "0/0/0");
}

TEST_CASE("disabled controls and scenery are not grounded") {
    std::string text =
        "a11y/1\n"
        "desktop | D | 0,0,100,100 | enabled\n"
        "  button | On | 0,0,10,10 | enabled\n"
        "  button | Off | 0,20,10,30 | disabled\n"
        "  label | Sign | 0,40,10,50 | enabled\n";
    auto elems = extract_interactables(parse_a11y(text));
    REQUIRE(elems.size() == 1);
    CHECK(elems[0].label == "On");
}

TEST_CASE("extract rejects a rootless screen") {
    std::string text =
        "a11y/1\n"
        "desktop | D | 5,5,5,5 | enabled\n";
    CHECK_THROWS_AS(extract_interactables(parse_a11y(text)), DegenerateScreenError);
}

TEST_CASE("the Start button semantic line") {
    A11yNode root = start_fixture();
    auto elems = extract_interactables(root);
    REQUIRE(elems.size() == 14);
    CHECK(semantic_line(elems[13]) ==
          "(ID: 14, Label: Start, X1: 0.35, Y1: 0.95, X2: 0.38, Y2: 1.00)");
}

TEST_CASE("semantics text matches the frozen golden") {
    auto elems = extract_interactables(start_fixture());
    CHECK(textualize(elems) == read_file(data_path("golden/start_button_semantics.txt")));
}

TEST_CASE("set-of-mark render matches the frozen golden byte for byte") {
    A11yNode root = start_fixture();
    auto elems = extract_interactables(root);
    Image canvas(root.bounds.width(), root.bounds.height(), {18, 98, 120});
    Image marked = render_som(canvas, elems);
    CHECK(encode_ppm(marked) == read_file(data_path("golden/start_button_som.ppm")));
}

TEST_CASE("set-of-mark rings sit on the box outline and leave the interior alone") {
    Image canvas(100, 100, {7, 7, 7});
    GroundedElement e;
    e.id = 1;
    e.box = {0.2, 0.2, 0.6, 0.6}; // pixels 20..60
    Image marked = render_som(canvas, {e});

    CHECK(marked.get(20, 20) == Color{255, 0, 0});  // outer corner
    CHECK(marked.get(60, 60) == Color{255, 0, 0});  // inclusive far corner
    CHECK(marked.get(21, 40) == Color{255, 0, 0});  // 2px band
    CHECK(marked.get(40, 40) == Color{7, 7, 7});    // interior untouched
    CHECK(marked.get(62, 40) == Color{7, 7, 7});    // outside untouched
    CHECK(canvas.get(20, 20) == Color{7, 7, 7});    // input not mutated
}

TEST_CASE("mark tags paint white digits on a red cell at the box corner") {
    Image canvas(100, 100, {7, 7, 7});
    GroundedElement e;
    e.id = 42;
    e.box = {0.3, 0.3, 0.9, 0.9};
    Image marked = render_som(canvas, {e});

    bool red_cell = false, white_ink = false;
    for (int y = 30; y < 45 && !(red_cell && white_ink); y++)
        for (int x = 30; x < 50; x++) {
            Color c = marked.get(x, y);
            if (c == Color{255, 0, 0}) red_cell = true;
            if (c == Color{255, 255, 255}) white_ink = true;
        }
    CHECK(red_cell);
    CHECK(white_ink);
}

TEST_CASE("Observation lookups by id and label") {
    Observation obs;
    GroundedElement a;
    a.id = 1;
    a.label = "Save";
    GroundedElement b;
    b.id = 2;
    b.label = "Close";
    obs.elements = {a, b};
    REQUIRE(obs.find(2) != nullptr);
    CHECK(obs.find(2)->label == "Close");
    CHECK(obs.find(3) == nullptr);
    REQUIRE(obs.find_label("Save") != nullptr);
    CHECK(obs.find_label("Save")->id == 1);
    CHECK(obs.find_label("save") == nullptr);
}

TEST_CASE("provider names") {
    CHECK(std::string(provider_name(GroundingProvider::A11yTree)) == "a11y");
    CHECK(std::string(provider_name(GroundingProvider::DetectionOcr)) == "detect");
}

namespace {

// Environment whose accessibility tree is broken; rendering still works, so
// the pixel detector can take over.
class BrokenTreeEnv : public MockDesktop {
public:
    using MockDesktop::MockDesktop;
    A11yNode observation_tree() override { throw A11yParseError(1, "tree unavailable"); }
};

// Environment where both providers are hopeless.
class BlindEnv : public BrokenTreeEnv {
public:
    using BrokenTreeEnv::BrokenTreeEnv;
    Image render() override { return Image(); } // empty frame blinds the detector
};

SimSetup tiny_setup() {
    SimSetup s;
    s.width = 320;
    s.height = 200;
    s.launcher = {"Notepad", "Files"};
    return s;
}

} // namespace

TEST_CASE("observe grounds through the accessibility tree by default") {
    MockDesktop env(tiny_setup());
    Observation obs = observe(env, GroundingProvider::A11yTree);
    CHECK(obs.provider == "a11y");
    CHECK(obs.screen_w == 320);
    CHECK(obs.screen_h == 200);
    CHECK_FALSE(obs.elements.empty());
    CHECK(obs.semantics == textualize(obs.elements));
    CHECK(obs.annotated.width == 320);
    CHECK(obs.find_label("Notepad") != nullptr);
}

TEST_CASE("observe falls back to the detector when the tree fails") {
    BrokenTreeEnv env(tiny_setup());
    Observation obs = observe(env, GroundingProvider::A11yTree);
    CHECK(obs.provider == "detect");
    CHECK_FALSE(obs.elements.empty());
}

TEST_CASE("observe reports both failures when no provider works") {
    BlindEnv env(tiny_setup());
    try {
        observe(env, GroundingProvider::A11yTree);
        FAIL("expected ObservationFailedError");
    } catch (const ObservationFailedError& e) {
        CHECK(contains(e.what(), "a11y"));
        CHECK(contains(e.what(), "detect"));
    }
}
