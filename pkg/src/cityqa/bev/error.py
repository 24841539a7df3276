class BevError(Exception):
    pass


class InvalidScale(ValueError, BevError):
    pass


class OutsideRaster(ValueError, BevError):

    def __init__(self, point, window):
        super().__init__(point, window)
        self.point = point
        self.window = window

    def __str__(self):
        return f'point {tuple(self.point)} lies outside raster window {self.window}'
