from .monitoring import measure_latency
from .parallel import ordered_map

__all__ = ['measure_latency', 'ordered_map']
