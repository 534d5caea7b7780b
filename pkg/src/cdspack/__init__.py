"""cdspack: connected-dominating-set packings and partitions of k-vertex-
connected graphs, vertex-sampling experiments, and a store-and-forward
broadcast simulator."""

from .broadcast import (ScheduleError, ScheduleLog, SimulationError,
                        ThroughputReport, extract_packing, simulate_broadcast)
from .connector import (ConnectorPath, find_potential_connectors,
                        is_live_connector, live_connectors, trim_to_minimal)
from .experiments import (disconnection_probability, isotonic_fit,
                          merger_trace_experiment,
                          observation_disconnect_probability,
                          sample_vertices, sampled_connectivity_experiment,
                          threshold_experiment, wilson_interval)
from .generators import (clique_chain, gnp_graph, harary, make_graph,
                         sanders_graph, sanders_subsampled)
from .graph import (BoundedPath, Graph, GraphFormatError, as_mask,
                    connected_components, induced_subgraph, is_cds,
                    is_connected, is_dominating, load_edgelist,
                    local_vertex_connectivity, mask_to_nodes,
                    max_disjoint_bounded_paths, save_edgelist,
                    vertex_connectivity)
from .kernels import NUMBA_ENABLED, backend_name
from .packing import (BuildParams, CdsPacking, ClassAssignment, build_packing,
                      packing_class_count, packing_from_json, packing_to_json)
from .partition import (NodeLabeling, PartitionResult,
                        brute_force_max_cds_partition, build_partition,
                        partition_class_count, partition_to_json)
from .verifier import (PackingReport, brute_force_min_vertex_cut,
                       brute_force_vertex_connectivity,
                       check_packing_upper_bound, verify_packing)
from .virtual import (LayerConfig, VirtualNode, coupling_probability, project,
                      sample_virtual_layer, virtual_adjacent)

__version__ = "0.1.0"
