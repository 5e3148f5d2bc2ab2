// Build an engine over a few disks, update it, and ask questions.

#include <iostream>

#include "geoconn/geoconn.hpp"

int main() {
  using namespace geoconn;

  std::vector<GeomObject> disks{
      {ObjectId{1}, Disk{{0, 0}, 2}},
      {ObjectId{2}, Disk{{3, 0}, 2}},
      {ObjectId{3}, Disk{{20, 0}, 2}},
  };
  EngineConfig cfg;
  cfg.family = Family::disk;
  Engine engine(disks, cfg);

  std::cout << "components: " << engine.num_components() << '\n';  // 2
  std::cout << "1~3: " << engine.query(ObjectId{1}, ObjectId{3}) << '\n';

  // A long disk bridges the gap.
  engine.insert({ObjectId{4}, Disk{{11, 0}, 8}});
  std::cout << "after bridge, 1~3: " << engine.query(ObjectId{1}, ObjectId{3}) << '\n';

  engine.remove(ObjectId{2});
  std::cout << "components: " << engine.num_components() << '\n';

  // Axis-parallel segments need general position: no collinear overlap.
  EngineConfig axis_cfg;
  axis_cfg.family = Family::axis;
  Engine grid({{ObjectId{1}, AxisSegment{Orientation::horizontal, 0, 0, 10}},
               {ObjectId{2}, AxisSegment{Orientation::vertical, 5, -3, 3}}},
              axis_cfg);
  std::cout << "cross: " << grid.query(ObjectId{1}, ObjectId{2}) << '\n';
  return 0;
}
