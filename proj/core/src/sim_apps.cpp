#include <algorithm>
#include <map>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"
#include "sim_internal.hpp"

namespace osagent {

namespace {

SimWidget button(const std::string& name, PixelRect rel, const std::string& action) {
    SimWidget w;
    w.role = "button";
    w.name = name;
    w.rel = rel;
    w.action = action;
    return w;
}

SimWidget textfield(const std::string& name, PixelRect rel, const std::string& action = "") {
    SimWidget w;
    w.role = "textfield";
    w.name = name;
    w.rel = rel;
    w.action = action;
    return w;
}

SimWidget label(const std::string& name, PixelRect rel) {
    SimWidget w;
    w.role = "label";
    w.name = name;
    w.rel = rel;
    return w;
}

SimWidget file_list(const std::string& name, PixelRect rel, const std::string& dir,
                    int visible_rows) {
    SimWidget w;
    w.role = "list";
    w.name = name;
    w.rel = rel;
    w.list_dir = dir;
    w.visible_rows = visible_rows;
    return w;
}

std::map<std::string, AppTemplate> make_registry() {
    std::map<std::string, AppTemplate> reg;

    {
        AppTemplate t;
        t.w = 240;
        t.h = 150;
        t.title = "Notepad";
        t.widgets = {
            button("File", {6, 18, 40, 32}, "menu:file"),
            textfield("Editor", {6, 36, 234, 144}, "editor"),
        };
        t.focus_on_open = "Editor";
        reg["notepad"] = t;
    }
    {
        AppTemplate t;
        t.w = 80;
        t.h = 40;
        t.title = "Menu";
        SimWidget save;
        save.role = "menuitem";
        save.name = "Save";
        save.rel = {4, 18, 76, 32};
        save.action = "menu_save";
        t.widgets = {save};
        reg["menu"] = t;
    }
    {
        AppTemplate t;
        t.w = 200;
        t.h = 92;
        t.title = "Save As";
        t.widgets = {
            textfield("Filename", {6, 20, 130, 46}),
            button("Save", {136, 20, 190, 36}, "commit_save"),
            button("Cancel", {136, 44, 190, 60}, "close"),
        };
        t.focus_on_open = "Filename";
        reg["saveas"] = t;
    }
    {
        AppTemplate t;
        t.w = 260;
        t.h = 160;
        t.title = "Files";
        t.widgets = {
            file_list("Files", {6, 20, 200, 110}, "/docs", 5),
            button("Open", {206, 20, 252, 36}, "open_selected"),
            button("Delete", {206, 44, 252, 60}, "delete_selected"),
            label("Status", {6, 116, 252, 130}),
        };
        reg["files"] = t;
    }
    {
        AppTemplate t;
        t.w = 240;
        t.h = 150;
        t.title = "Settings";
        SimWidget dark = button("Dark Mode: ", {6, 20, 130, 36}, "toggle:dark_mode");
        dark.name_setting = "dark_mode";
        SimWidget vol = textfield("Volume", {6, 44, 86, 70});
        vol.name_setting = "volume"; // seeds the field with the current value
        t.widgets = {
            dark,
            vol,
            button("Apply", {92, 44, 136, 60}, "apply_volume"),
            button("-", {142, 44, 158, 60}, "volume_delta:-10"),
            button("+", {164, 44, 180, 60}, "volume_delta:10"),
        };
        reg["settings"] = t;
    }
    {
        AppTemplate t;
        t.w = 260;
        t.h = 160;
        t.title = "Mail";
        t.widgets = {
            textfield("To", {6, 20, 254, 44}),
            textfield("Body", {6, 48, 254, 110}),
            button("Send", {6, 116, 60, 132}, "send_mail"),
            label("Status", {70, 116, 254, 130}),
        };
        reg["mail"] = t;
    }
    {
        AppTemplate t;
        t.w = 280;
        t.h = 160;
        t.title = "Browser";
        t.widgets = {
            textfield("Address", {6, 20, 210, 44}),
            button("Go", {216, 20, 250, 36}, "browse_go"),
            button("Bookmark", {6, 50, 80, 66}, "bookmark"),
            label("Page", {86, 50, 274, 64}),
        };
        t.focus_on_open = "Address";
        reg["browser"] = t;
    }
    {
        AppTemplate t;
        t.w = 300;
        t.h = 170;
        t.title = "Code";
        t.widgets = {
            file_list("Tree", {6, 20, 90, 110}, "/src", 5),
            textfield("Source", {96, 20, 294, 130}, "editor"),
            button("Run", {6, 116, 50, 132}, "run_code"),
            label("Output", {6, 136, 294, 150}),
        };
        reg["code"] = t;
    }

    // Smartphone apps: single full-screen stack over a pinned home grid.
    {
        AppTemplate t;
        t.title = "Home";
        t.fullscreen = true;
        t.closable = false;
        t.widgets = {
            button("Notes", {20, 40, 92, 64}, "open_app:notes"),
            button("Messages", {108, 40, 180, 64}, "open_app:messages"),
            button("Config", {20, 80, 92, 104}, "open_app:msettings"),
        };
        reg["home"] = t;
    }
    {
        AppTemplate t;
        t.title = "Notes";
        t.fullscreen = true;
        t.widgets = {
            textfield("Note", {6, 30, 194, 200}, "editor"),
            button("Save", {6, 210, 60, 226}, "save_note"),
            button("Back", {140, 210, 194, 226}, "close"),
        };
        t.focus_on_open = "Note";
        reg["notes"] = t;
    }
    {
        AppTemplate t;
        t.title = "Messages";
        t.fullscreen = true;
        t.widgets = {
            textfield("To", {6, 30, 194, 56}),
            textfield("Text", {6, 60, 194, 150}, "editor"),
            button("Send", {6, 210, 60, 226}, "send_message"),
            button("Back", {140, 210, 194, 226}, "close"),
            label("Status", {6, 240, 194, 254}),
        };
        reg["messages"] = t;
    }
    {
        AppTemplate t;
        t.title = "Config";
        t.fullscreen = true;
        SimWidget wifi = button("Wifi: ", {6, 30, 120, 50}, "toggle:wifi");
        wifi.name_setting = "wifi";
        SimWidget dark = button("Dark: ", {6, 60, 120, 80}, "toggle:dark_mode");
        dark.name_setting = "dark_mode";
        t.widgets = {
            wifi,
            dark,
            button("Back", {6, 290, 60, 306}, "close"),
        };
        reg["msettings"] = t;
    }

    return reg;
}

const std::map<std::string, AppTemplate>& registry() {
    static const std::map<std::string, AppTemplate> reg = make_registry();
    return reg;
}

std::string basename_of(const std::string& path) {
    return path.substr(path.rfind('/') + 1);
}

void set_status(SimWindow& w, const std::string& text) {
    for (SimWidget& wd : w.widgets)
        if (wd.role == "label" && (wd.name == "Status" || wd.name == "Output"))
            wd.content = text;
}

} // namespace

const AppTemplate* SimApps::tmpl(const std::string& name) {
    auto it = registry().find(name);
    return it == registry().end() ? nullptr : &it->second;
}

std::string SimApps::template_for_display(const std::string& display) {
    static const std::map<std::string, std::string> names = {
        {"Notepad", "notepad"}, {"Files", "files"},     {"Settings", "settings"},
        {"Mail", "mail"},       {"Browser", "browser"}, {"Code", "code"},
        {"Notes", "notes"},     {"Messages", "messages"}, {"Config", "msettings"},
    };
    auto it = names.find(display);
    return it == names.end() ? "" : it->second;
}

void SimApps::open_display_app(MockDesktop& d, const std::string& display) {
    std::string tmpl_name = template_for_display(display);
    if (tmpl_name.empty()) throw ActionFailedError("no app named '" + display + "'");
    d.spawn(tmpl_name, tmpl(tmpl_name)->title, -1, -1, "", "", 0);
}

void SimApps::save_editor(MockDesktop& d, SimWindow& w) {
    SimWidget* editor = nullptr;
    for (SimWidget& wd : w.widgets)
        if (wd.action == "editor") editor = &wd;
    if (!editor) throw ActionFailedError("nothing to save here");
    if (w.path.empty()) {
        // Unsaved buffer: route through the save dialog.
        SimWindow* dlg = d.spawn("saveas", "Save As", w.rect.x1 + 20, w.rect.y1 + 30, "", "",
                                 w.id);
        dlg->dir = "/docs";
        return;
    }
    d.files_[w.path] = editor->content;
}

void SimApps::commit_save_dialog(MockDesktop& d, SimWindow& w) {
    const SimWidget* name_field = w.find_widget("Filename");
    std::string name = name_field ? trim(name_field->content) : "";
    if (name.empty()) throw ActionFailedError("filename is empty");
    SimWindow* owner = d.window_by_id(w.owner_id);
    if (!owner) throw ActionFailedError("save target window is gone");
    SimWidget* editor = nullptr;
    for (SimWidget& wd : owner->widgets)
        if (wd.action == "editor") editor = &wd;
    if (!editor) throw ActionFailedError("save target has no editor");

    std::string path = (w.dir.empty() ? "/docs" : w.dir) + "/" + name;
    d.files_[path] = editor->content;
    owner->path = path;
    owner->title = name + " - " + tmpl(owner->app)->title;
    d.close_window(w.id);
}

void SimApps::open_path_in_editor(MockDesktop& d, SimWindow& from, const std::string& path) {
    auto it = d.files_.find(path);
    if (it == d.files_.end()) throw ActionFailedError("file vanished: " + path);
    d.spawn("notepad", basename_of(path) + " - Notepad", from.rect.x1 + 15, from.rect.y1 + 10,
            it->second, path, 0);
}

void SimApps::delete_selected(MockDesktop& d, SimWindow& w) {
    for (SimWidget& wd : w.widgets) {
        if (wd.role != "list") continue;
        auto items = d.list_items(wd);
        if (wd.selected < 0 || wd.selected >= static_cast<int>(items.size()))
            throw ActionFailedError("no file selected");
        std::string name = items[static_cast<size_t>(wd.selected)];
        d.files_.erase(wd.list_dir + "/" + name);
        wd.selected = -1;
        int n = static_cast<int>(items.size()) - 1;
        wd.viewport = std::clamp(wd.viewport, 0, std::max(0, n - wd.visible_rows));
        set_status(w, "Deleted " + name);
        return;
    }
    throw ActionFailedError("no file list here");
}

void SimApps::open_selected(MockDesktop& d, SimWindow& w) {
    for (SimWidget& wd : w.widgets) {
        if (wd.role != "list") continue;
        auto items = d.list_items(wd);
        if (wd.selected < 0 || wd.selected >= static_cast<int>(items.size()))
            throw ActionFailedError("no file selected");
        std::string name = items[static_cast<size_t>(wd.selected)];
        set_status(w, "Opened " + name);
        open_path_in_editor(d, w, wd.list_dir + "/" + name);
        return;
    }
    throw ActionFailedError("no file list here");
}

void SimApps::list_row(MockDesktop& d, int win_id, const std::string& list_name, int item_index,
                       bool dbl) {
    SimWindow* w = d.window_by_id(win_id);
    if (!w) return;
    SimWidget* wd = w->find_widget(list_name);
    if (!wd) return;
    wd->selected = item_index;
    auto items = d.list_items(*wd);
    std::string name = items[static_cast<size_t>(item_index)];

    if (w->app == "code") {
        // Selecting a tree entry loads it into the source editor.
        std::string path = wd->list_dir + "/" + name;
        auto it = d.files_.find(path);
        if (it == d.files_.end()) throw ActionFailedError("file vanished: " + path);
        if (SimWidget* src = w->find_widget("Source")) src->content = it->second;
        w->path = path;
        w->title = name + " - Code";
        return;
    }
    if (dbl) {
        open_selected(d, *w);
        return;
    }
    set_status(*w, name);
}

void SimApps::run_tag(MockDesktop& d, int win_id, const std::string& widget_name,
                      const std::string& tag) {
    SimWindow* w = d.window_by_id(win_id);
    if (!w) return;

    if (tag.empty()) return;

    if (starts_with(tag, "open_app:")) {
        std::string app = tag.substr(9);
        d.spawn(app, tmpl(app)->title, -1, -1, "", "", 0);
        return;
    }
    if (tag == "close") {
        d.close_window(w->id);
        return;
    }
    if (tag == "menu:file") {
        d.spawn("menu", "Menu", w->rect.x1 + 6, w->rect.y1 + 33, "", "", w->id);
        return;
    }
    if (tag == "menu_save") {
        int owner_id = w->owner_id;
        d.close_window(w->id); // invalidates w
        SimWindow* owner = d.window_by_id(owner_id);
        if (!owner) throw ActionFailedError("menu owner is gone");
        save_editor(d, *owner);
        return;
    }
    if (tag == "save_editor") {
        save_editor(d, *w);
        return;
    }
    if (tag == "commit_save") {
        commit_save_dialog(d, *w);
        return;
    }
    if (tag == "open_selected") {
        open_selected(d, *w);
        return;
    }
    if (tag == "delete_selected") {
        delete_selected(d, *w);
        return;
    }
    if (starts_with(tag, "toggle:")) {
        std::string key = tag.substr(7);
        std::string& v = d.settings_[key];
        v = (v == "on") ? "off" : "on";
        return;
    }
    if (tag == "apply_volume") {
        SimWidget* f = w->find_widget("Volume");
        std::string v = f ? trim(f->content) : "";
        bool numeric = !v.empty() && v.find_first_not_of("0123456789") == std::string::npos;
        int n = numeric ? std::stoi(v) : -1;
        if (n < 0 || n > 100) throw ActionFailedError("volume must be an integer 0..100");
        d.settings_["volume"] = std::to_string(n);
        return;
    }
    if (starts_with(tag, "volume_delta:")) {
        int delta = std::stoi(tag.substr(13));
        int cur = 0;
        auto it = d.settings_.find("volume");
        if (it != d.settings_.end()) cur = std::stoi(it->second);
        int n = std::clamp(cur + delta, 0, 100);
        d.settings_["volume"] = std::to_string(n);
        if (SimWidget* f = w->find_widget("Volume")) f->content = std::to_string(n);
        return;
    }
    if (tag == "send_mail") {
        SimWidget* to = w->find_widget("To");
        SimWidget* body = w->find_widget("Body");
        if (!to || trim(to->content).empty()) throw ActionFailedError("recipient is empty");
        d.files_["/mail/outbox"] +=
            "To: " + trim(to->content) + "\n" + (body ? body->content : "") + "\n---\n";
        set_status(*w, "Sent to " + trim(to->content));
        to->content.clear();
        if (body) body->content.clear();
        return;
    }
    if (tag == "send_message") {
        SimWidget* to = w->find_widget("To");
        SimWidget* body = w->find_widget("Text");
        if (!to || trim(to->content).empty()) throw ActionFailedError("recipient is empty");
        d.files_["/messages/outbox"] +=
            "To: " + trim(to->content) + "\n" + (body ? body->content : "") + "\n---\n";
        set_status(*w, "Sent to " + trim(to->content));
        to->content.clear();
        if (body) body->content.clear();
        return;
    }
    if (tag == "browse_go") {
        SimWidget* addr = w->find_widget("Address");
        std::string url = addr ? trim(addr->content) : "";
        if (url.empty()) throw ActionFailedError("address is empty");
        d.settings_["browser.url"] = url;
        if (SimWidget* page = w->find_widget("Page")) page->content = "Page: " + url;
        return;
    }
    if (tag == "bookmark") {
        auto it = d.settings_.find("browser.url");
        if (it == d.settings_.end() || it->second.empty())
            throw ActionFailedError("no page loaded");
        d.settings_["browser.bookmark"] = it->second;
        return;
    }
    if (tag == "run_code") {
        if (w->path.empty()) throw ActionFailedError("no file loaded");
        d.files_["/out/run.log"] = "ran " + w->path + "\n";
        set_status(*w, "ran " + w->path);
        return;
    }
    if (tag == "save_note") {
        SimWidget* note = w->find_widget("Note");
        d.files_["/notes/note.txt"] = note ? note->content : "";
        return;
    }
    throw ActionFailedError("unhandled behavior tag '" + tag + "'");
}

bool SimApps::run_key(MockDesktop& d, const std::string& chord) {
    SimWindow* w = d.front_window();
    if (!w) return false;
    if ((w->app == "notepad" || w->app == "code") && chord == "ctrl+s") {
        save_editor(d, *w);
        return true;
    }
    if (w->app == "saveas" && chord == "enter") {
        commit_save_dialog(d, *w);
        return true;
    }
    if (w->app == "files" && chord == "delete") {
        delete_selected(d, *w);
        return true;
    }
    return false;
}

} // namespace osagent
