import math
import random


def add(a: int, b: int) -> int:
    return a + b


def subtract(a: int, b: int) -> int:
    return a - b


def multiply(a: int, b: int) -> int:
    return a * b


def max_of(a: int, b: int) -> int:
    if a > b:
        return a
    else:
        return b


def min_of(a: int, b: int) -> int:
    return a if a < b else b


def abs_value(x: int) -> int:
    if x < 0:
        return -x
    return x


def is_even(n: int) -> bool:
    return n % 2 == 0


def sum_to(n: int) -> int:
    total: int = 0
    for i in range(1, n + 1):
        total += i
    return total


def factorial(n: int) -> int:
    result: int = 1
    for i in range(2, n + 1):
        result *= i
    return result


def power_of(number: float, exponent: float) -> float:
    return number ** exponent


def square_root(x: float) -> float:
    return math.sqrt(x)


def natural_log(x: float) -> float:
    return math.log(x)


def floor_of(x: float) -> float:
    return math.floor(x)


def int_divide(a: int, b: int) -> int:
    return a // b


def fibonacci(n: int) -> int:
    a: int = 0
    b: int = 1
    for i in range(n):
        temp: int = a + b
        a = b
        b = temp
    return a


def gcd(a: int, b: int) -> int:
    while b != 0:
        t: int = b
        b = a % b
        a = t
    return a


def count_digits(n: int) -> int:
    count: int = 0
    while n > 0:
        n = n // 10
        count += 1
    return count


def reverse_number(n: int) -> int:
    rev: int = 0
    while n > 0:
        rev = rev * 10 + n % 10
        n = n // 10
    return rev


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for i in range(2, n):
        if n % i == 0:
            return False
    return True


def print_value(x: int) -> None:
    print(x)


def print_range(n: int) -> None:
    for i in range(n):
        print(i)


def string_length(s: str) -> int:
    return len(s)


def greet(name: str) -> None:
    print("Hello " + name)


def clamp(x: int, low: int, high: int) -> int:
    if x < low:
        return low
    elif x > high:
        return high
    else:
        return x


def classify(x: int) -> int:
    if x > 0:
        return 1
    elif x < 0:
        return 2
    else:
        return 0


def both_positive(a: int, b: int) -> bool:
    return a > 0 and b > 0


def either_zero(a: int, b: int) -> bool:
    return a == 0 or b == 0


def negate(flag: bool) -> bool:
    return not flag


def average(a: float, b: float) -> float:
    return (a + b) / 2


def hypotenuse(a: float, b: float) -> float:
    return math.sqrt(a * a + b * b)


def count_down(n: int) -> None:
    while n > 0:
        print(n)
        n -= 1


def sum_even(n: int) -> int:
    total: int = 0
    for i in range(0, n, 2):
        total += i
    return total


def count_backwards(n: int) -> None:
    for i in range(n, 0, -1):
        print(i)


def first_multiple(n: int, k: int) -> int:
    i: int = 1
    while True:
        if i * n % k == 0:
            break
        i += 1
    return i * n


def skip_multiples(n: int, k: int) -> int:
    total: int = 0
    for i in range(n):
        if i % k == 0:
            continue
        total += i
    return total


def digit_sum(n: int) -> int:
    total: int = 0
    while n > 0:
        total += n % 10
        n = n // 10
    return total


def square(x: int) -> int:
    return x * x


def sum_of_squares(a: int, b: int) -> int:
    return square(a) + square(b)


def is_leap_year(year: int) -> bool:
    return (year % 4 == 0 and year % 100 != 0) or year % 400 == 0


def max_of_three(a: int, b: int, c: int) -> int:
    m: int = a
    if b > m:
        m = b
    if c > m:
        m = c
    return m


def replace_text(s: str) -> str:
    return s.replace("a", "b")


def random_between(low: int, high: int) -> int:
    return random.randint(low, high)


def print_inline(x: int) -> None:
    print(x, end="")


def is_valid(x: int, low: int, high: int) -> bool:
    ok: bool = x >= low and x <= high
    return ok


def halve_until_odd(n: int) -> int:
    while n % 2 == 0 and n > 0:
        n = n // 2
    return n
