#ifndef PERCOLAB_PERCOLAB_HPP_
#define PERCOLAB_PERCOLAB_HPP_

#include "percolab/boolean_model.hpp"
#include "percolab/explore.hpp"
#include "percolab/group.hpp"
#include "percolab/invariance.hpp"
#include "percolab/io.hpp"
#include "percolab/maps.hpp"
#include "percolab/net.hpp"
#include "percolab/partition.hpp"
#include "percolab/phase.hpp"
#include "percolab/point_process.hpp"
#include "percolab/quasi_isometry.hpp"
#include "percolab/space.hpp"
#include "percolab/stats.hpp"
#include "percolab/version.hpp"

#endif  // PERCOLAB_PERCOLAB_HPP_
