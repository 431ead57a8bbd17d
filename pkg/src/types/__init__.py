from .ndarray import PydanticNDArray
