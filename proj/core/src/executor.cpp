#include "osagent/executor.hpp"

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

namespace {

// Mark id or normalized point -> pixel position on this screen.
std::pair<int, int> resolve_point(const Action& a, const Observation& obs) {
    if (a.target_id) {
        const GroundedElement* e = obs.find(*a.target_id);
        if (!e)
            throw ScriptError("invalid_target",
                              "no element with id " + std::to_string(*a.target_id));
        auto [nx, ny] = resolve_target(e->box);
        return to_pixels(nx, ny, obs.screen_w, obs.screen_h);
    }
    return to_pixels(a.point->first, a.point->second, obs.screen_w, obs.screen_h);
}

void run_action(const Action& a, Environment& env, const Observation& obs) {
    switch (a.kind) {
        case ActionKind::MouseMove: {
            auto [x, y] = resolve_point(a, obs);
            env.move_cursor(x, y);
            break;
        }
        case ActionKind::SingleClick: env.click(0, false); break;
        case ActionKind::DoubleClick: env.click(0, true); break;
        case ActionKind::RightClick: env.click(1, false); break;
        case ActionKind::Scroll: env.scroll(a.dist_i); break;
        case ActionKind::Drag: env.drag(a.px1, a.py1, a.px2, a.py2); break;
        case ActionKind::KeyPress: env.press(split(a.key, '+')); break;
        case ActionKind::WriteText: env.write_text(a.text); break;
        case ActionKind::Tap: {
            auto [x, y] = resolve_point(a, obs);
            env.tap(x, y, false);
            break;
        }
        case ActionKind::LongTap: {
            auto [x, y] = resolve_point(a, obs);
            env.tap(x, y, true);
            break;
        }
        case ActionKind::Swipe: {
            int x = a.sx, y = a.sy;
            if (a.target_id) {
                auto [px, py] = resolve_point(a, obs);
                x = px;
                y = py;
            }
            env.swipe(x, y, a.dir, a.dist_f);
            break;
        }
    }
}

} // namespace

ExecOutcome execute_script(const std::vector<Action>& script, Environment& env,
                           const Observation& obs) {
    ExecOutcome out;
    for (const Action& a : script) {
        try {
            run_action(a, env, obs);
        } catch (const EnvCrashError& ex) {
            out.ok = false;
            out.crashed = true;
            out.error = std::string(ex.kind()) + ": " + ex.what() + " (while running " +
                        render_action(a) + ")";
            return out;
        } catch (const AgentError& ex) {
            out.ok = false;
            out.error = std::string(ex.kind()) + ": " + ex.what() + " (while running " +
                        render_action(a) + ")";
            return out;
        }
        out.executed++;
    }
    return out;
}

} // namespace osagent
