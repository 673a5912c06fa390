from .limiter import WorkerLimiter, WorkerLimiterOptions, gather_limited, map_concurrently, map_settled

__all__ = ["WorkerLimiter", "WorkerLimiterOptions", "gather_limited", "map_concurrently", "map_settled"]
