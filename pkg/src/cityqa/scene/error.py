class SceneError(Exception):
    pass


class SceneFileMissing(FileNotFoundError, SceneError):

    def __init__(self, path):
        super().__init__(2, 'No such scene file', str(path))
        self.path = path


class SchemaViolation(ValueError, SceneError):
    """Scene file content violates the scene file schema."""

    def __init__(self, message, line=None, path=None):
        super().__init__(message, line, path)
        self.message = message
        self.line = line
        self.path = path

    def __str__(self):
        location = ':'.join(str(part) for part in (self.path, self.line) if part is not None)
        return f'{location}: {self.message}' if location else self.message


class InvalidObject(ValueError, SceneError):
    pass


class DuplicateObject(InvalidObject):

    def __init__(self, object_id):
        super().__init__(f'duplicate object id: {object_id}')
        self.object_id = object_id


class UnknownObject(LookupError, SceneError):

    def __init__(self, object_id, scene_id=None):
        super().__init__(object_id, scene_id)
        self.object_id = object_id
        self.scene_id = scene_id

    def __str__(self):
        where = f' in scene {self.scene_id}' if self.scene_id is not None else ''
        return f'unknown object id {self.object_id}{where}'


class EmptyScene(ValueError, SceneError):

    def __init__(self, scene_id):
        super().__init__(scene_id)
        self.scene_id = scene_id

    def __str__(self):
        return f'scene {self.scene_id} has no objects'


class ContainmentCycle(ValueError, SceneError):
    pass
