"""Exception types shared across the fee-market library."""


class FeeMarketError(Exception):
    """Base class for all domain errors raised by this package."""


class NonPositiveBid(FeeMarketError):
    pass


class NonFiniteBid(FeeMarketError):
    pass


class EmptyOthers(FeeMarketError):
    pass


class TooFewBidders(FeeMarketError):
    pass


class EmptySupport(FeeMarketError):
    pass


class LengthMismatch(FeeMarketError):
    pass


class DuplicateTxId(FeeMarketError):
    pass


class MalformedBlock(FeeMarketError):
    pass


class BudgetExceeded(FeeMarketError):
    pass


class IndexOutOfRange(FeeMarketError):
    pass


class MalformedRow(FeeMarketError):
    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyPool(FeeMarketError):
    pass
