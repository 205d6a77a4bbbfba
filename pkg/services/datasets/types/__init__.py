from .dataset import DatasetInfo, DatasetName, DatasetSpec

__all__ = ["DatasetInfo", "DatasetName", "DatasetSpec"]
