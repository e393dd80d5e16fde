"""
Пользовательские сообщения командной строки (stderr)
"""

CLI_MESSAGES = {
    "invalid_input": "Ошибка во входных данных: {error}",
    "size_limit": "Превышен лимит размера: {error}",
    "params_below_formula": (
        "Внимание: ℓ={ell}, L={big_l} ниже значений формулы (ℓ={formula_ell}, L={formula_big_l}); "
        "соответствие размеров MAAF и DFVS в этом режиме не гарантируется"
    ),
    "big_l_not_above_ell": "Внимание: L={big_l} не больше ℓ={ell}; гарантия конструкции не действует",
    "display_check_skipped": (
        "Проверка отображения пропущена: {reticulations} ретикуляций больше лимита {limit}"
    ),
    "written": "Записано: {path}",
}
