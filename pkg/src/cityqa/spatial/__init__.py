from .compass import Octant, bearing, compass_octant  # noqa: F401
from .error import CoLocated, InvalidCount, SpatialError  # noqa: F401
from .geometry import DistanceMode, RelOffset, pairwise_distance, relative_position  # noqa: F401
from .neighbors import CentroidIndex, knn_neighbors  # noqa: F401
