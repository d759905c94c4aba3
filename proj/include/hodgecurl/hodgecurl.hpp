#ifndef HODGECURL_HODGECURL_HPP
#define HODGECURL_HODGECURL_HPP

// Discrete exterior calculus on tetrahedral meshes: self-adjoint curl
// operators through boundary Hodge decomposition, period-normalized
// symplectic harmonic bases and Lagrangian trace conditions.

#include "hodgecurl/core.hpp"
#include "hodgecurl/curlcurl.hpp"
#include "hodgecurl/eigsolve.hpp"
#include "hodgecurl/exact.hpp"
#include "hodgecurl/hodge.hpp"
#include "hodgecurl/homology.hpp"
#include "hodgecurl/mesh.hpp"
#include "hodgecurl/meshgen.hpp"
#include "hodgecurl/mshio.hpp"
#include "hodgecurl/report.hpp"
#include "hodgecurl/spectral.hpp"
#include "hodgecurl/symplectic.hpp"
#include "hodgecurl/whitney.hpp"

#endif
