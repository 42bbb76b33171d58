#include <filesystem>

#include "elas/png_io.hpp"
#include "elas/road_markings.hpp"

namespace elas {

namespace {

void rect(BinaryMap& m, int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x)
            if (m.inside(x, y)) m.at(x, y) = 1;
}

void tri(BinaryMap& m, double x0, double y0, double x1, double y1, double x2, double y2) {
    auto edge = [](double ax, double ay, double bx, double by, double px, double py) {
        return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    };
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            double e0 = edge(x0, y0, x1, y1, x, y);
            double e1 = edge(x1, y1, x2, y2, x, y);
            double e2 = edge(x2, y2, x0, y0, x, y);
            bool in = (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
            if (in) m.at(x, y) = 1;
        }
}

BinaryMap mirror_h(const BinaryMap& m) {
    BinaryMap out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) out.at(x, y) = m.at(m.width - 1 - x, y);
    return out;
}

}  // namespace

// Eight 32x32 arrow glyphs: ahead, left, right, ahead-or-left, ahead-or-right,
// merge-left, merge-right, left-or-right.
TemplateSet default_template_set() {
    TemplateSet set;
    for (auto& t : set.arrows) t = BinaryMap(32, 32);

    // 1: straight ahead
    rect(set.arrows[0], 13, 10, 6, 20);
    tri(set.arrows[0], 16, 1, 6, 12, 26, 12);

    // 2: left turn
    rect(set.arrows[1], 10, 13, 20, 6);
    rect(set.arrows[1], 24, 13, 6, 15);
    tri(set.arrows[1], 1, 16, 12, 6, 12, 26);

    // 3: right turn (mirror of 2)
    set.arrows[2] = mirror_h(set.arrows[1]);

    // 4: ahead or left
    rect(set.arrows[3], 18, 6, 6, 24);
    tri(set.arrows[3], 21, 0, 14, 8, 28, 8);
    rect(set.arrows[3], 8, 18, 12, 5);
    tri(set.arrows[3], 2, 20, 11, 13, 11, 28);

    // 5: ahead or right (mirror of 4)
    set.arrows[4] = mirror_h(set.arrows[3]);

    // 6: merge left (diagonal)
    for (int t = 0; t < 18; ++t) rect(set.arrows[5], 22 - t, 28 - t, 5, 5);
    tri(set.arrows[5], 2, 4, 16, 6, 6, 18);

    // 7: merge right (mirror of 6)
    set.arrows[6] = mirror_h(set.arrows[5]);

    // 8: left or right
    rect(set.arrows[7], 6, 14, 20, 5);
    rect(set.arrows[7], 14, 14, 4, 14);
    tri(set.arrows[7], 1, 16, 10, 8, 10, 25);
    tri(set.arrows[7], 30, 16, 21, 8, 21, 25);

    return set;
}

TemplateSet load_template_set(const std::string& dir) {
    TemplateSet set;
    for (int i = 0; i < 8; ++i) {
        std::string path = dir + "/arrow_" + std::to_string(i + 1) + ".png";
        GrayImage img = read_png_gray(path);
        if (img.width != 32 || img.height != 32)
            throw IoError("template " + path + " must be 32x32");
        BinaryMap m(32, 32);
        bool any = false;
        for (size_t k = 0; k < img.data.size(); ++k) {
            m.data[k] = img.data[k] >= 128 ? 1 : 0;
            any |= m.data[k] != 0;
        }
        if (!any) throw IoError("template " + path + " is empty");
        set.arrows[size_t(i)] = std::move(m);
    }
    return set;
}

void save_template_set(const TemplateSet& set, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < 8; ++i)
        write_png(dir + "/arrow_" + std::to_string(i + 1) + ".png", set.arrows[size_t(i)]);
}

}  // namespace elas
