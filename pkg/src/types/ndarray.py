from typing import Annotated, Any

import numpy as np
from pydantic import GetCoreSchemaHandler, GetJsonSchemaHandler
from pydantic.json_schema import JsonSchemaValue
from pydantic_core import core_schema


class _NDArraySchema:
    """浮点数组字段，序列化为嵌套列表"""

    @classmethod
    def __get_pydantic_core_schema__(
        cls, _source: type[Any], _handler: GetCoreSchemaHandler
    ) -> core_schema.CoreSchema:
        return core_schema.json_or_python_schema(
            python_schema=core_schema.with_info_plain_validator_function(cls._validate),
            json_schema=core_schema.with_info_plain_validator_function(cls._validate),
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda instance: np.asarray(instance).tolist()
            ),
        )

    @classmethod
    def __get_pydantic_json_schema__(
        cls, schema: core_schema.CoreSchema, handler: GetJsonSchemaHandler
    ) -> JsonSchemaValue:
        return {"type": "array", "items": {"type": "number"}, "example": [0.0, 0.5, 1.0]}

    @classmethod
    def _validate(cls, v, _: core_schema.ValidationInfo):
        array = np.array(v, dtype=float)
        if not np.all(np.isfinite(array)):
            raise ValueError("array contains non-finite values")
        array.setflags(write=False)
        return array


PydanticNDArray = Annotated[np.ndarray, _NDArraySchema]
