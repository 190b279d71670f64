#ifndef ZSLIAS_SELECTION_HPP
#define ZSLIAS_SELECTION_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace zslias {

// Binary attribute mask plus the order in which bits were switched on.
struct SelectionVector {
    std::vector<int> mask;   // 0/1, length N_a
    std::vector<int> order;  // selected attribute indices, selection order

    static SelectionVector zeros(std::size_t n) {
        SelectionVector s;
        s.mask.assign(n, 0);
        return s;
    }
    static SelectionVector ones(std::size_t n) {
        SelectionVector s;
        s.mask.assign(n, 1);
        s.order.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.order[i] = static_cast<int>(i);
        return s;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (int v : mask) c += v;
        return c;
    }

    void add(int attr) {
        if (mask.at(attr) != 0) throw std::logic_error("attribute already selected");
        mask[attr] = 1;
        order.push_back(attr);
    }

    bool consistent() const {
        if (count() != order.size()) return false;
        std::vector<int> seen(mask.size(), 0);
        for (int i : order) {
            if (i < 0 || static_cast<std::size_t>(i) >= mask.size()) return false;
            if (seen[i]++ || mask[i] != 1) return false;
        }
        return true;
    }
};

} // namespace zslias

#endif
